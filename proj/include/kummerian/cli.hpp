#pragma once

// Commands behind the `kummerian` executable. Each returns a RunReport so that tests can drive
// them without spawning processes.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kummerian/report.hpp"

namespace kummerian::cli {

inline constexpr const char* kToolName = "kummerian";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kDefaultPrecision = 2;

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kNegative = 2;  // REFUTED / EMPTY / failed fixtures
inline constexpr int kCapExceeded = 3;
}  // namespace exit_code

struct CommandOptions {
    std::optional<int> precision;
    std::optional<std::string> theta;
    std::optional<std::string> word;
    std::optional<std::string> phi;
    std::uint64_t seed = 0;
    SearchLimits limits;
    bool timing = false;
};

struct RunReport {
    std::string command;
    Json json;
    int exit_code = exit_code::kOk;
    std::string text;
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

inline std::vector<BigInt> parse_integer_list(const std::string& s, const char* what) {
    std::vector<BigInt> out;
    for (const auto& part : split(s, ',')) {
        const auto t = trim(part);
        if (t.empty()) throw UsageError(std::string("empty entry in ") + what);
        try {
            std::size_t used = 0;
            const long long v = std::stoll(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            out.emplace_back(v);
        } catch (const std::exception&) {
            throw UsageError(std::string("bad integer '") + t + "' in " + what);
        }
    }
    return out;
}

/// "a,b,c;d,e,f;..." -> characters, one per ';'-separated group.
inline std::vector<CharacterFp> parse_characters(const std::string& s, const Presentation& P) {
    std::vector<CharacterFp> out;
    for (const auto& group : split(s, ';')) {
        CharacterFp phi;
        for (const auto& v : parse_integer_list(group, "--phi")) phi.push_back(fp::reduce(v.convert_to<std::int64_t>(), static_cast<std::int64_t>(P.p)));
        if (static_cast<int>(phi.size()) != P.d())
            throw UsageError("--phi character has " + std::to_string(phi.size()) + " values for " + std::to_string(P.d()) + " generators");
        out.push_back(std::move(phi));
    }
    return out;
}

namespace detail {

inline std::string options_key(const CommandOptions& o) {
    std::ostringstream os;
    os << "N=" << (o.precision ? std::to_string(*o.precision) : "-") << ";theta=" << o.theta.value_or("-")
       << ";word=" << o.word.value_or("-") << ";phi=" << o.phi.value_or("-") << ";seed=" << o.seed
       << ";max_solutions=" << o.limits.max_solutions << ";max_branches=" << o.limits.max_branches;
    return os.str();
}

inline Json envelope(const std::string& command, const std::string& input_text, const CommandOptions& o) {
    return {{"tool", kToolName},
            {"version", kToolVersion},
            {"command", command},
            {"inputs_digest", fnv1a_hex(input_text + '\0' + options_key(o))},
            {"p", nullptr},
            {"precision", nullptr},
            {"status", nullptr},
            {"witness", nullptr},
            {"solutions", nullptr},
            {"pairings", nullptr},
            {"massey", nullptr}};
}

inline int precision_for(const CommandOptions& o, const Presentation& P) {
    const int n = o.precision.value_or(P.precision.value_or(kDefaultPrecision));
    if (n < 1) throw UsageError("precision must be >= 1");
    return n;
}

template <typename Body>
RunReport guarded(const std::string& command, const std::string& path, const CommandOptions& o, Body body) {
    const auto start = std::chrono::steady_clock::now();
    RunReport rep;
    rep.command = command;
    std::string text;
    try {
        text = path.empty() ? std::string() : read_file(path);
        rep.json = envelope(command, text, o);
        body(text, rep);
    } catch (const ParseError& e) {
        rep.json = envelope(command, text, o);
        rep.json["status"] = "ERROR";
        rep.json["error"] = {{"line", e.line()}, {"column", e.column()}, {"message", e.what()}};
        rep.exit_code = exit_code::kError;
        rep.text = path + ":" + std::string(e.what()) + "\n";
    } catch (const std::exception& e) {
        rep.json = envelope(command, text, o);
        rep.json["status"] = "ERROR";
        rep.json["error"] = {{"message", e.what()}};
        rep.exit_code = exit_code::kError;
        rep.text = std::string("error: ") + e.what() + "\n";
    }
    if (o.timing)
        rep.json["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace detail

/// Kummerian check at one orientation: 0 = KUMMERIAN_AT, 2 = REFUTED, 1 = error.
inline RunReport cmd_check(const std::string& path, const CommandOptions& o) {
    return detail::guarded("check", path, o, [&](const std::string& text, RunReport& rep) {
        const auto P = parse_presentation(text);
        const int N = detail::precision_for(o, P);
        std::vector<BigInt> values;
        if (o.theta) values = parse_integer_list(*o.theta, "--theta");
        else if (P.theta) values = *P.theta;
        else throw UsageError("no orientation: pass --theta or add a theta line");
        if (static_cast<int>(values.size()) != P.d())
            throw UsageError("theta has " + std::to_string(values.size()) + " values for " + std::to_string(P.d()) + " generators");
        const auto theta = Orientation::from_residues(P.p, N, values);
        const auto v = is_kummerian_at(P, theta, N);
        const auto vj = to_json(v);
        rep.json["p"] = P.p;
        rep.json["precision"] = N;
        rep.json["status"] = vj["status"];
        rep.json["witness"] = vj["witness"];
        rep.json["fox"] = to_json(fox_matrix(P, theta));
        rep.exit_code = v.kummerian() ? exit_code::kOk : exit_code::kNegative;
        std::ostringstream os;
        os << status_name(v.status) << "(" << N << ")";
        if (v.witness)
            os << " witness: Fox entry (r" << v.witness->relator + 1 << ", " << P.names[static_cast<std::size_t>(v.witness->generator)] << ") = " << v.witness->value.to_string();
        rep.text = os.str() + "\n";
    });
}

/// Orientation search: 0 = SOLUTIONS, 2 = EMPTY, 3 = CAP_EXCEEDED, 1 = error.
inline RunReport cmd_search(const std::string& path, const CommandOptions& o) {
    return detail::guarded("search", path, o, [&](const std::string& text, RunReport& rep) {
        const auto P = parse_presentation(text);
        const int N = detail::precision_for(o, P);
        const auto r = search_orientations(P, N, o.limits);
        const auto rj = to_json(r, P.p);
        rep.json["p"] = P.p;
        rep.json["precision"] = N;
        rep.json["status"] = rj["status"];
        rep.json["solutions"] = rj["solutions"];
        rep.json["search"] = rj;
        rep.exit_code = r.status == SearchStatus::Solutions ? exit_code::kOk
                        : r.status == SearchStatus::Empty   ? exit_code::kNegative
                                                            : exit_code::kCapExceeded;
        std::ostringstream os;
        os << status_name(r.status) << "(" << r.level << ") explored " << r.explored_branches << " branches\n";
        for (const auto& s : r.solutions) {
            os << "  theta =";
            for (const auto& x : s.residues()) os << ' ' << x;
            os << " mod " << P.p << "^" << N << "\n";
        }
        os << rj["statement"].get<std::string>() << "\n";
        rep.text = os.str();
    });
}

/// Bockstein and cup pairings of every relator, and the cup-product kernel.
inline RunReport cmd_cup(const std::string& path, const CommandOptions& o) {
    return detail::guarded("cup", path, o, [&](const std::string& text, RunReport& rep) {
        const auto P = parse_presentation(text);
        const auto table = pairing_table(P);
        const auto kernel = cup_kernel(P);
        rep.json["p"] = P.p;
        rep.json["status"] = "OK";
        rep.json["pairings"] = to_json(table);
        rep.json["cup_kernel"] = to_json(kernel);
        std::ostringstream os;
        for (const auto& r : table.relators) {
            os << "r" << r.relator + 1 << ": Bock";
            for (auto a : r.bockstein) os << ' ' << a;
            os << "; cup";
            bool any = false;
            for (std::size_t i = 0; i < r.cup.size(); ++i)
                for (std::size_t k = i + 1; k < r.cup.size(); ++k)
                    if (r.cup[i][k]) {
                        os << " (" << P.names[i] << "," << P.names[k] << ")=" << r.cup[i][k];
                        any = true;
                    }
            if (!any) os << " 0";
            if (r.p2_diagonal) {
                os << "; diagonal";
                for (auto a : *r.p2_diagonal) os << ' ' << a;
            }
            os << "\n";
        }
        os << "cup kernel dimension " << kernel.basis.size() << (kernel.demushkin_like ? " (Demushkin-like)" : "") << "\n";
        rep.text = os.str();
    });
}

/// Lower-central weight of --word, or of every relator together with the mildness verdicts.
/// Without a presentation file, words are read over generators x1..x9.
inline RunReport cmd_omega(const std::string& path, const CommandOptions& o) {
    return detail::guarded("omega", path, o, [&](const std::string& text, RunReport& rep) {
        Presentation P;
        if (!path.empty()) {
            P = parse_presentation(text);
        } else {
            if (!o.word) throw UsageError("omega needs a presentation file or --word");
            for (int i = 1; i <= 9; ++i) P.names.push_back("x" + std::to_string(i));
        }
        const auto show = [](const std::optional<int>& w) -> Json { return w ? Json(*w) : Json("> " + std::to_string(kMaxOmegaCap)); };
        rep.json["status"] = "OK";
        if (!path.empty()) rep.json["p"] = P.p;
        std::ostringstream os;
        if (o.word) {
            const Word w = parse_word(*o.word, P.names, P.exponent_context());
            const auto om = omega(w, kMaxOmegaCap);
            rep.json["omega"] = show(om);
            os << "omega = " << (om ? std::to_string(*om) : "> " + std::to_string(kMaxOmegaCap)) << "\n";
        } else {
            Json rels = Json::array();
            for (std::size_t j = 0; j < P.relators.size(); ++j) {
                const auto om = omega(P.relators[j], kMaxOmegaCap);
                rels.push_back({{"relator", j + 1}, {"omega", show(om)}});
                os << "r" << j + 1 << ": omega = " << (om ? std::to_string(*om) : "> " + std::to_string(kMaxOmegaCap)) << "\n";
            }
            Json mild = Json::array();
            for (const auto& m : labute_mildness(P)) {
                mild.push_back(to_json(m));
                os << "r" << m.relator + 1 << ": mild " << status_name(m.status) << "\n";
            }
            rep.json["relators"] = rels;
            rep.json["mildness"] = mild;
        }
        rep.text = os.str();
    });
}

/// Massey product of the --phi characters: three give the triple product, 2..5 the staged
/// solver.
inline RunReport cmd_massey(const std::string& path, const CommandOptions& o) {
    return detail::guarded("massey", path, o, [&](const std::string& text, RunReport& rep) {
        const auto P = parse_presentation(text);
        if (!o.phi) throw UsageError("massey needs --phi");
        const auto phis = parse_characters(*o.phi, P);
        MasseyVerdict v;
        if (phis.size() == 3) v = triple_massey(P, phis[0], phis[1], phis[2]);
        else v = massey_product(P, phis, o.limits.max_branches);
        rep.json["p"] = P.p;
        rep.json["status"] = v.essential() ? "ESSENTIAL" : v.contains_zero ? "CONTAINS_ZERO" : v.non_empty ? "NON_EMPTY" : "EMPTY";
        rep.json["massey"] = to_json(v);
        if (phis.size() != 3) rep.json["massey"]["n"] = phis.size();
        rep.text = std::string("nonEmpty=") + (v.non_empty ? "true" : "false") + " containsZero=" + (v.contains_zero ? "true" : "false") +
                   " essential=" + (v.essential() ? "true" : "false") + (v.complete ? "" : " (incomplete: branch cap)") + "\n";
    });
}

/// Subset match: every key of `expected` must be present in `actual` with a matching value;
/// arrays match element by element.
inline bool json_matches(const Json& expected, const Json& actual) {
    if (expected.is_object()) {
        if (!actual.is_object()) return false;
        for (const auto& [k, v] : expected.items())
            if (!actual.contains(k) || !json_matches(v, actual[k])) return false;
        return true;
    }
    if (expected.is_array()) {
        if (!actual.is_array() || actual.size() != expected.size()) return false;
        for (std::size_t i = 0; i < expected.size(); ++i)
            if (!json_matches(expected[i], actual[i])) return false;
        return true;
    }
    return expected == actual;
}

inline RunReport run_command(const std::string& command, const std::string& path, const CommandOptions& o) {
    if (command == "check") return cmd_check(path, o);
    if (command == "search") return cmd_search(path, o);
    if (command == "cup") return cmd_cup(path, o);
    if (command == "omega") return cmd_omega(path, o);
    if (command == "massey") return cmd_massey(path, o);
    throw UsageError("unknown command '" + command + "'");
}

/// Runs the checks in every `<name>.expect.json` next to `<name>.pres` in `dir`, in name order.
/// Each check is {"command", optional "precision"/"theta"/"word"/"phi"/"max_solutions"/
/// "max_branches", "expect": {...}, optional "exit_code"}. Exit 0 iff every check passes.
inline RunReport cmd_run_all(const std::string& dir, const CommandOptions& base) {
    RunReport rep;
    rep.command = "run-all";
    rep.json = detail::envelope("run-all", dir, base);
    std::vector<std::filesystem::path> sidecars;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        const auto name = entry.path().filename().string();
        if (name.size() > 12 && name.ends_with(".expect.json")) sidecars.push_back(entry.path());
    }
    if (ec) {
        rep.json["status"] = "ERROR";
        rep.json["error"] = {{"message", "cannot list " + dir}};
        rep.exit_code = exit_code::kError;
        rep.text = "error: cannot list " + dir + "\n";
        return rep;
    }
    std::sort(sidecars.begin(), sidecars.end());
    Json results = Json::array();
    int passed = 0, failed = 0;
    std::ostringstream os;
    for (const auto& sidecar : sidecars) {
        const auto stem = sidecar.filename().string().substr(0, sidecar.filename().string().size() - 12);
        const auto pres = (sidecar.parent_path() / (stem + ".pres")).string();
        Json doc;
        try {
            doc = Json::parse(read_file(sidecar.string()));
        } catch (const std::exception& e) {
            ++failed;
            results.push_back({{"fixture", stem}, {"pass", false}, {"error", e.what()}});
            os << "FAIL " << stem << ": unreadable sidecar: " << e.what() << "\n";
            continue;
        }
        int index = 0;
        for (const auto& check : doc.at("checks")) {
            ++index;
            CommandOptions o = base;
            if (check.contains("precision")) o.precision = check["precision"].get<int>();
            if (check.contains("theta")) o.theta = check["theta"].get<std::string>();
            if (check.contains("word")) o.word = check["word"].get<std::string>();
            if (check.contains("phi")) o.phi = check["phi"].get<std::string>();
            if (check.contains("max_solutions")) o.limits.max_solutions = check["max_solutions"].get<std::uint64_t>();
            if (check.contains("max_branches")) o.limits.max_branches = check["max_branches"].get<std::uint64_t>();
            o.timing = false;
            const auto command = check.at("command").get<std::string>();
            RunReport r;
            try {
                r = run_command(command, pres, o);
            } catch (const std::exception& e) {
                r.json = {{"status", "ERROR"}, {"error", e.what()}};
                r.exit_code = exit_code::kError;
            }
            bool ok = json_matches(check.at("expect"), r.json);
            if (check.contains("exit_code")) ok = ok && check["exit_code"].get<int>() == r.exit_code;
            ok ? ++passed : ++failed;
            const std::string label = stem + "#" + std::to_string(index) + " " + command;
            results.push_back({{"fixture", stem}, {"check", index}, {"command", command}, {"pass", ok}, {"status", r.json.value("status", Json())}});
            os << (ok ? "PASS " : "FAIL ") << label;
            if (!ok) os << ": got " << r.json.dump();
            os << "\n";
        }
    }
    os << passed << " passed, " << failed << " failed\n";
    rep.json["status"] = failed == 0 ? "PASS" : "FAIL";
    rep.json["results"] = results;
    rep.json["passed"] = passed;
    rep.json["failed"] = failed;
    rep.exit_code = failed == 0 ? exit_code::kOk : exit_code::kNegative;
    rep.text = os.str();
    return rep;
}

}  // namespace kummerian::cli
