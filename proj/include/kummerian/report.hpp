#pragma once

// JSON views of verdicts and search results.

#include <string>

#include "json.hpp"
#include "kummerian/kummer.hpp"
#include "kummerian/magnus.hpp"
#include "kummerian/massey.hpp"

namespace kummerian {

using Json = nlohmann::ordered_json;

inline Json residue_json(const BigInt& r) {
    if (r >= 0 && r <= BigInt(INT64_MAX)) return r.convert_to<std::int64_t>();
    return r.str();
}

inline Json to_json(const PadicScalar& x) { return x.to_string(); }

inline std::string status_name(KummerStatus s) { return s == KummerStatus::KummerianAt ? "KUMMERIAN_AT" : "REFUTED"; }

inline std::string status_name(SearchStatus s) {
    switch (s) {
    case SearchStatus::Solutions: return "SOLUTIONS";
    case SearchStatus::Empty: return "EMPTY";
    case SearchStatus::CapExceeded: return "CAP_EXCEEDED";
    }
    return "";
}

inline std::string status_name(Mildness m) {
    switch (m) {
    case Mildness::True: return "TRUE";
    case Mildness::False: return "FALSE";
    case Mildness::NotApplicable: return "NOT_APPLICABLE";
    }
    return "";
}

inline Json to_json(const FoxMatrix& M) {
    Json rows = Json::array();
    for (const auto& row : M.entries) {
        Json r = Json::array();
        for (const auto& e : row) r.push_back(residue_json(e.residue()));
        rows.push_back(std::move(r));
    }
    return {{"p", M.p}, {"precision", M.precision}, {"entries", rows}};
}

/// Indices are 1-based, as in the presentation text.
inline Json to_json(const KummerVerdict& v) {
    Json out{{"status", status_name(v.status)}, {"precision", v.precision}, {"witness", nullptr}};
    if (v.witness)
        out["witness"] = {{"relator", v.witness->relator + 1},
                          {"generator", v.witness->generator + 1},
                          {"residue", residue_json(v.witness->value.residue())},
                          {"valuation", v.witness->value.valuation()}};
    return out;
}

inline Json solutions_json(const std::vector<Orientation>& solutions) {
    Json out = Json::array();
    for (const auto& s : solutions) {
        Json r = Json::array();
        for (const auto& x : s.residues()) r.push_back(residue_json(x));
        out.push_back(std::move(r));
    }
    return out;
}

inline std::string search_family(std::uint64_t p) { return p == 2 ? "theta = 1 mod 4 on every generator" : "theta = 1 mod p on every generator"; }

inline std::string search_statement(const OrientationSearchResult& r, std::uint64_t p) {
    switch (r.status) {
    case SearchStatus::Empty:
        if (p == 2)
            return "no Kummerian orientation with all generator values = 1 mod 4 exists; values = 3 mod 4 were not searched";
        return "no Kummerian torsion-free orientation exists";
    case SearchStatus::Solutions:
        return std::to_string(r.solutions.size()) + " orientation(s) satisfy the Kummerian conditions mod p^" + std::to_string(r.precision);
    case SearchStatus::CapExceeded:
        return "search stopped at a cap while building level " + std::to_string(r.level);
    }
    return "";
}

inline Json to_json(const OrientationSearchResult& r, std::uint64_t p) {
    Json levels = Json::array();
    for (int k = r.start_level; k < static_cast<int>(r.survivors.size()); ++k)
        levels.push_back({{"level", k}, {"classes", r.survivors[static_cast<std::size_t>(k)]}});
    return {{"status", status_name(r.status)},
            {"precision", r.precision},
            {"level", r.level},
            {"family", search_family(p)},
            {"explored_branches", r.explored_branches},
            {"levels", levels},
            {"solutions", solutions_json(r.solutions)},
            {"statement", search_statement(r, p)}};
}

/// Search for Kummerian orientations with a human-readable certificate.
inline Json refutation_report(const Presentation& P, int precision, const SearchLimits& limits = {}) {
    return to_json(search_orientations(P, precision, limits), P.p);
}

inline Json to_json(const RelatorPairing& r) {
    Json cup = Json::array();
    for (std::size_t i = 0; i < r.cup.size(); ++i)
        for (std::size_t k = i + 1; k < r.cup.size(); ++k)
            if (r.cup[i][k] != 0) cup.push_back({i + 1, k + 1, r.cup[i][k]});
    Json out{{"relator", r.relator + 1}, {"bockstein", r.bockstein}, {"cup", cup}};
    if (r.p2_diagonal) {
        out["p2_diagonal"] = *r.p2_diagonal;
        out["calibrated"] = r.calibrated;
    }
    return out;
}

inline Json to_json(const PairingTable& t) {
    Json rows = Json::array();
    for (const auto& r : t.relators) rows.push_back(to_json(r));
    return rows;
}

inline Json to_json(const CupKernel& k) {
    return {{"basis", k.basis}, {"nondegenerate", k.nondegenerate}, {"demushkin_like", k.demushkin_like}};
}

inline Json to_json(const MildnessVerdict& m) {
    Json out{{"relator", m.relator + 1}, {"status", status_name(m.status)}};
    if (m.status != Mildness::NotApplicable) {
        out["f"] = m.f;
        out["omega_u"] = m.omega_u;
        out["omega_v"] = m.omega_v;
        out["ratio"] = m.numerator.str() + "/" + m.denominator.str();
    }
    return out;
}

inline Json to_json(const MasseyVerdict& v) {
    Json out{{"nonEmpty", v.non_empty},
             {"containsZero", v.contains_zero},
             {"essential", v.essential()},
             {"rank_center", v.rank_center},
             {"rank_full", v.rank_full},
             {"witness", nullptr}};
    if (v.witness) out["witness"] = *v.witness;
    if (!v.complete) out["complete"] = false;
    return out;
}

}  // namespace kummerian
