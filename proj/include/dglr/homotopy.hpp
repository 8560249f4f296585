#pragma once

#include "dglr/dgl.hpp"

namespace dglr {

struct NotPLocalFactorial : std::runtime_error {
    explicit NotPLocalFactorial(const std::string& w) : std::runtime_error(w) {}
};
struct NotABoundaryWitness : std::runtime_error {
    explicit NotABoundaryWitness(const std::string& w) : std::runtime_error(w) {}
};
struct EndpointMismatch : std::runtime_error {
    explicit EndpointMismatch(const std::string& w) : std::runtime_error(w) {}
};

// Mapping cylinder of a free dgl: alphabet W u sW u W' with |sw| = |w|+1,
// |w'| = |w|, D(w) = dw, D(sw) = w', D(w') = 0, and the degree +1
// derivation S with S(w) = sw, S(sw) = S(w') = 0.
struct CylinderPresentation {
    DglPresentation dgl;            // differential D on the extended alphabet
    size_t n_base = 0;              // base generators are ids [0, n_base)
    std::vector<GenId> s_of;        // base id -> sw id
    std::vector<GenId> prime_of;    // base id -> w' id
    TensorDerivation S;
};

CylinderPresentation cylinder(const DglPresentation& L);

// e^theta(w) = w + w' + sum_{n>=1} (1/n!) (S o D)^n (w); the sum is finite
// in each degree.  Throws NotPLocalFactorial when p <= some reached n.
Tensor e_theta(const CylinderPresentation& C, GenId base_gen);

// map of free dgls, given on generators
struct DglMap {
    const DglPresentation* source = nullptr;
    const DglPresentation* target = nullptr;
    std::map<GenId, LiePtr> images;

    Tensor image_tensor(GenId g) const;
    Tensor apply(const Tensor& t) const;  // algebra-map extension to words
};

// chain-map condition checked by full expansion on every generator
bool is_chain_map(const DglMap& f, std::string* first_failure = nullptr);

struct HomotopyWitness {
    DglMap F;                 // from the cylinder of the source
    bool endpoints_swapped;   // true: F|_W = alpha', F o e^theta|_W = alpha
    std::shared_ptr<CylinderPresentation> cyl;
};

// The explicit homotopy of Lemma-2.1 shape: alpha, alpha' agree below
// degree n; on degree-n generators alpha'(w) = alpha(w) + y with y = d(z).
// The witness records which endpoint F restricts to, verified by expansion.
HomotopyWitness build_lemma_homotopy(const DglMap& alpha, const DglMap& alpha_prime, int n,
                                     const LiePtr& y, const LiePtr& z);

enum class HomotopyAnswer { Yes, No, Unknown };

struct HomotopyDecision {
    HomotopyAnswer answer = HomotopyAnswer::Unknown;
    std::optional<HomotopyWitness> witness;  // for Yes with a nontrivial step
};

// Semi-decision by degreewise correction: at the lowest degree where the
// maps differ the correction must be a boundary (exact No otherwise); each
// step consumes one budget unit.
HomotopyDecision homotopic_on_generators(const DglMap& alpha, const DglMap& alpha_prime,
                                         int budget);

}  // namespace dglr
