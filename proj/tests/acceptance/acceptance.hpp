#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "cspref/refute.hpp"

// One acceptance criterion = one function printing a PASS/FAIL line.  Each
// records its sub-checks so a failure names the first broken condition.
class Criterion {
  public:
    Criterion(int number, std::string title)
        : number_(number), title_(std::move(title)), start_(clock::now()) {}

    void require(bool cond, const std::string& what) {
        ++checks_;
        if (!cond) {
            ++failures_;
            if (failures_ <= 12) std::printf("    FAILED: %s\n", what.c_str());
        }
    }

    void note(const std::string& text) { std::printf("    %s\n", text.c_str()); }

    // budget_seconds <= 0 disables the runtime check
    bool finish(double budget_seconds) {
        double elapsed = std::chrono::duration<double>(clock::now() - start_).count();
        bool time_ok = budget_seconds <= 0 || elapsed <= budget_seconds;
        bool ok = failures_ == 0 && time_ok;
        std::printf("CRITERION %d %s — %s (%zu checks, %.1fs%s)\n", number_,
                    ok ? "PASS" : "FAIL", title_.c_str(), checks_, elapsed,
                    time_ok ? "" : ", over budget");
        std::fflush(stdout);
        return ok;
    }

  private:
    using clock = std::chrono::steady_clock;
    int number_;
    std::string title_;
    clock::time_point start_;
    std::size_t checks_ = 0;
    std::size_t failures_ = 0;
};

// Shared helpers.
namespace acceptance {

// Instance whose constraints are all satisfied by a hidden assignment.
cspref::Instance planted_instance(const cspref::Predicate& p, int n, std::size_t m,
                                  std::uint64_t seed);

// Exact max over all 2^n assignments of |Dhat_{I,x}(mask)| via one
// Walsh-Hadamard pass (n <= 24).
cspref::Rat exhaustive_fourier_max(const cspref::Instance& inst, std::uint32_t mask);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace acceptance

bool criterion_1();
bool criterion_2();
bool criterion_3();
bool criterion_4();
bool criterion_5();
bool criterion_6();
bool criterion_7();
bool criterion_8();
bool criterion_9();
