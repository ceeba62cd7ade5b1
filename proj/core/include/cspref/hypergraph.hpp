#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspref/spectral.hpp"

namespace cspref {

// k-uniform hypergraph on n vertices; edges are sorted k-subsets of [0,n).
struct Hypergraph {
    int n = 0;
    int k = 0;
    std::vector<std::vector<int>> edges;
    double p = 0;  // sampling probability when known
    std::uint64_t seed = 0;

    std::string to_json() const;
    static Hypergraph from_json(const std::string& text);
    std::string to_edge_list() const;  // one sorted k-tuple per line
    static Hypergraph from_edge_list(const std::string& text, int n, int k);
};

// H(n,p,k): each of the C(n,k) edges included independently with probability p.
Hypergraph sample_hypergraph(int n, double p, int k, std::uint64_t seed);

// Certificate that alpha(H) < beta: every independent set I satisfies
// p*C(|I|,k) <= B for the spectral bound B of the tensor w(T_e) = p - 1{e in E}
// on sorted canonical tuples.
struct IndependenceCertificate {
    double spectral_bound = 0;   // B
    std::uint64_t beta = 0;      // least b with p*C(b,k) > B; alpha(H) <= beta-1
    double p = 0;
    SpectralCertificate form;

    std::string to_json() const;
};

// p overrides the stored sampling probability when positive (needed for
// externally loaded hypergraphs).  Throws CertifyError on spectral failure.
IndependenceCertificate certify_independence(const Hypergraph& h, double p,
                                             const CertifyOptions& opts = {});

// Succeeds (chi(H) > xi) iff the independence certificate reaches
// beta <= ceil(n/xi).
struct ChromaticVerdict {
    bool certified = false;
    int xi = 0;
    IndependenceCertificate independence;
};
ChromaticVerdict certify_chromatic(const Hypergraph& h, double p, int xi,
                                   const CertifyOptions& opts = {});

}  // namespace cspref
