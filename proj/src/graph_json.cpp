#include "isolab/graph_json.hpp"

#include <cstdio>

namespace isolab {

double sig12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

ordered_json to_json(const SpectralReport &r) {
    ordered_json j;
    j["schema"] = "isolab/spectral/v1";
    j["k"] = sig12(r.k);
    ordered_json ev = ordered_json::array();
    for (int i = 0; i < r.eigenvalues.size(); ++i)
        ev.push_back(sig12(r.eigenvalues[i]));
    j["eigenvalues"] = std::move(ev);
    j["lambda_nontrivial_max"] = sig12(r.lambda_max_nontrivial);
    j["ramanujan_bound"] = sig12(r.ramanujan_bound);
    j["additive_gap"] = sig12(r.additive_gap);
    j["connected"] = r.connected;
    j["bipartite"] = r.bipartite;
    return j;
}

ordered_json to_json(const WalkReport &r) {
    ordered_json j;
    j["schema"] = "isolab/walk/v1";
    j["h"] = r.h;
    j["S_size"] = r.S_size;
    j["k"] = sig12(r.k);
    j["c"] = sig12(r.c);
    j["r"] = r.r;
    j["trials"] = r.trials;
    j["hits"] = r.hits;
    j["empirical_prob"] = sig12(r.empirical_prob);
    j["bound_prob"] = sig12(r.bound_prob);
    return j;
}

namespace {

ordered_json adjacency_json(const Eigen::MatrixXi &A) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < A.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int k = 0; k < A.cols(); ++k)
            row.push_back(A(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

ordered_json to_json(const CayleyGraph &g) {
    ordered_json j;
    j["schema"] = "isolab/graph/v1";
    j["kind"] = "cayley";
    j["discriminant"] = g.D;
    j["m"] = g.m;
    j["degree"] = g.degree;
    ordered_json verts = ordered_json::array();
    for (auto &f : g.vertices)
        verts.push_back({f.a, f.b, f.c});
    j["vertices"] = std::move(verts);
    j["generators"] = ordered_json::array();
    for (auto &gen : g.generators) {
        ordered_json e;
        e["ell"] = gen.ell;
        e["form"] = {gen.form.a, gen.form.b, gen.form.c};
        e["paired"] = gen.paired;
        j["generators"].push_back(std::move(e));
    }
    j["adjacency"] = adjacency_json(g.adjacency);
    return j;
}

ordered_json to_json(const SSGraph &g) {
    ordered_json j;
    j["schema"] = "isolab/graph/v1";
    j["kind"] = "supersingular";
    j["p"] = g.p;
    j["ell"] = g.ell;
    ordered_json verts = ordered_json::array();
    for (auto &v : g.vertices)
        verts.push_back({v.a, v.b}); // j = a + b w over F_{p^2}
    j["vertices"] = std::move(verts);
    j["e_weights"] = g.e_weights;
    j["adjacency"] = adjacency_json(g.adjacency);
    return j;
}

ordered_json to_json(const ReductionTranscript &t) {
    ordered_json j;
    j["schema"] = "isolab/reduction/v1";
    ordered_json walk = ordered_json::array();
    for (auto &s : t.walk) {
        ordered_json e;
        e["ell"] = s.ell;
        e["kernel_hash"] = s.kernel_hash;
        e["j"] = s.j;
        walk.push_back(std::move(e));
    }
    j["walk"] = std::move(walk);
    j["walk_length"] = t.walk_length;
    j["level_h"] = t.level_h;
    j["level_k"] = sig12(t.level_k);
    j["level_c"] = sig12(t.level_c);
    j["queries"] = t.queries;
    j["success"] = t.success;
    j["recovered_x"] = t.recovered_x;
    return j;
}

ordered_json to_json(const CpiReport &r) {
    ordered_json j;
    j["schema"] = "isolab/cpi/v1";
    j["samples"] = r.samples;
    j["ok"] = r.ok;
    j["supersingular_excluded"] = r.supersingular;
    j["factor_timeouts"] = r.factor_timeout;
    j["frac_c_pi_one"] = sig12(r.frac_c_pi_one);
    j["frac_squarefree_dpi"] = sig12(r.frac_squarefree_dpi);
    ordered_json pe = ordered_json::object();
    for (auto &[beta, prob] : r.prob_P_exceeds)
        pe[std::to_string(beta)] = sig12(prob);
    j["prob_P_exceeds"] = std::move(pe);
    return j;
}

ordered_json to_json_probe(const VolcanoProbe &p) {
    ordered_json j;
    j["schema"] = "isolab/level/v1";
    j["ell"] = p.ell;
    j["depth_below"] = p.depth_below;
    j["v_ell_c_pi"] = p.v_ell_cpi;
    j["v_ell_c_E"] = p.v_ell_cE;
    j["on_surface"] = p.on_surface;
    ordered_json nb = ordered_json::array();
    for (auto &[jj, dir] : p.neighbors) {
        ordered_json e;
        e["j"] = jj;
        e["direction"] = dir == EdgeDirection::Up        ? "up"
                         : dir == EdgeDirection::Down    ? "down"
                                                         : "horizontal";
        nb.push_back(std::move(e));
    }
    j["neighbors"] = std::move(nb);
    return j;
}

ordered_json to_json(const GrhSumReport &r) {
    ordered_json j;
    j["schema"] = "isolab/hecke/v1";
    j["D"] = r.D;
    j["h"] = r.h;
    j["chi_index"] = r.chi_index;
    j["m"] = r.m;
    j["re_S"] = sig12(r.S.real());
    j["im_S"] = sig12(r.S.imag());
    j["abs_S"] = sig12(std::abs(r.S));
    j["ratio"] = sig12(r.ratio);
    j["psi_abs"] = sig12(r.psi_abs);
    j["remainder"] = sig12(r.remainder);
    j["remainder_bound"] = sig12(r.remainder_bound);
    return j;
}

std::string dump_report(const ordered_json &j) { return j.dump(1) + "\n"; }

Eigen::MatrixXi adjacency_from_json(const ordered_json &j) {
    const auto &rows = j.at("adjacency");
    int n = int(rows.size());
    Eigen::MatrixXi A(n, n);
    for (int i = 0; i < n; ++i) {
        require(int(rows[i].size()) == n, Errc::BadInput, "ragged adjacency matrix");
        for (int k = 0; k < n; ++k)
            A(i, k) = rows[i][k].get<int>();
    }
    return A;
}

} // namespace isolab
