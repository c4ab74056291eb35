#pragma once

#include <string>

#include "json.hpp"

#include "isolab/classgroup.hpp"
#include "isolab/hecke.hpp"
#include "isolab/level.hpp"
#include "isolab/reduce.hpp"
#include "isolab/spectral.hpp"
#include "isolab/supersingular.hpp"
#include "isolab/walk.hpp"

namespace isolab {

using ordered_json = nlohmann::ordered_json;

/// Rounds to 12 significant digits so that reports are byte-stable.
double sig12(double x);

ordered_json to_json(const SpectralReport &r);
ordered_json to_json(const WalkReport &r);
ordered_json to_json(const CayleyGraph &g);
ordered_json to_json(const SSGraph &g);
ordered_json to_json(const ReductionTranscript &t);
ordered_json to_json(const CpiReport &r);
ordered_json to_json_probe(const VolcanoProbe &p);
ordered_json to_json(const GrhSumReport &r);

/// Serialized with a trailing newline; the byte-identical report format.
std::string dump_report(const ordered_json &j);

/// Parse an adjacency-bearing graph JSON back into a matrix.
Eigen::MatrixXi adjacency_from_json(const ordered_json &j);

} // namespace isolab
