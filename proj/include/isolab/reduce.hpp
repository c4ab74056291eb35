#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isolab/classgroup.hpp"
#include "isolab/curve.hpp"
#include "isolab/isogeny.hpp"
#include "isolab/spectral.hpp"

namespace isolab {

struct DlogInstance {
    Curve<PrimeField> curve;
    Point<PrimeField> P, Q;
    u64 n = 0; // order of P
};

/// Average-case solver model: answers on a subset of curves (by j-invariant),
/// refuses elsewhere.  Answers are produced by an exact solver, so they are
/// correct whenever given.
struct Oracle {
    std::function<bool(u64 j)> accepts;
    u64 queries = 0;
    std::optional<u64> query(const DlogInstance &inst);
};

struct WalkStep {
    u64 ell = 0;
    u64 kernel_hash = 0;
    u64 j = 0; // codomain j-invariant
};

struct ReductionTranscript {
    std::vector<WalkStep> walk; // steps of the final (successful) walk
    u64 queries = 0;
    bool success = false;
    u64 recovered_x = 0;
    u64 walk_length = 0;        // prescribed per-walk step count
    u64 level_h = 0;
    double level_c = 0, level_k = 0;
};

/// Baby-step giant-step discrete log: x with x P = Q, 0 <= x < n.
u64 dlog_bsgs(const DlogInstance &inst);

/// Pushes an instance through an isogeny of degree coprime to n.
DlogInstance transport(const Isogeny<PrimeField> &phi, const DlogInstance &inst);

/// Random self-reduction: repeated horizontal walks of mixing length with
/// transport, querying the oracle at each endpoint, until a verified answer.
ReductionTranscript random_reduce(const DlogInstance &inst, Oracle &oracle, u64 m,
                                  u64 max_queries, u64 seed);

/// Instance generator: random point and multiplier on the given curve.
DlogInstance make_instance(const Curve<PrimeField> &C, Rng &rng);

} // namespace isolab
