#include "interimsim/scenario_file.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace interimsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_double(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
    return v;
}

template <class Int>
Int to_int(std::string_view s) {
    s = trim(s);
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
    return v;
}

bool to_bool(std::string_view s) {
    s = trim(s);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

struct Call {
    std::string name;
    std::vector<double> args;
};

Call parse_call(std::string_view expr) {
    expr = trim(expr);
    const auto open = expr.find('(');
    if (open == std::string_view::npos || expr.back() != ')')
        throw std::invalid_argument("expected name(args), got '" + std::string(expr) + "'");
    Call c{std::string(trim(expr.substr(0, open))), {}};
    for (auto a : split(expr.substr(open + 1, expr.size() - open - 2), ',')) c.args.push_back(to_double(a));
    return c;
}

void require_args(const Call& c, std::size_t lo, std::size_t hi) {
    if (c.args.size() < lo || c.args.size() > hi)
        throw std::invalid_argument(c.name + "(...) takes " + std::to_string(lo) +
                                    (lo == hi ? "" : " to " + std::to_string(hi)) + " arguments");
}

std::pair<double, double> parse_gamma(std::string_view expr) {
    const Call c = parse_call(expr);
    if (c.name != "gamma") throw std::invalid_argument("expected gamma(shape, rate)");
    require_args(c, 2, 2);
    return {c.args[0], c.args[1]};
}

std::pair<double, double> parse_normal2(std::string_view expr) {
    const Call c = parse_call(expr);
    if (c.name != "normal") throw std::invalid_argument("expected normal(mean, var)");
    require_args(c, 2, 2);
    return {c.args[0], c.args[1]};
}

/* Comma list of sizes; a:b and a:b:step expand to ranges. */
std::vector<int> parse_schedule(std::string_view s) {
    std::vector<int> out;
    s = trim(s);
    if (s.empty() || s == "none") return out;
    for (auto item : split(s, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(to_int<int>(parts[0]));
        } else if (parts.size() <= 3) {
            const int a = to_int<int>(parts[0]), b = to_int<int>(parts[1]);
            const int step = parts.size() == 3 ? to_int<int>(parts[2]) : 1;
            if (step < 1 || b < a) throw std::invalid_argument("bad range '" + std::string(item) + "'");
            for (int v = a; v <= b; v += step) out.push_back(v);
        } else {
            throw std::invalid_argument("bad range '" + std::string(item) + "'");
        }
    }
    return out;
}

struct SectionEntries {
    std::string name;
    std::string label;  // variant label
    int line = 0;
    std::vector<std::tuple<std::string, std::string, int>> entries;
};

std::string quote_label(const std::string& label) {
    if (label.find('"') != std::string::npos) throw std::invalid_argument("variant labels may not contain '\"'");
    return "\"" + label + "\"";
}

}  // namespace

ParseError::ParseError(int line, const std::string& msg)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

std::string format_number(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw std::runtime_error("format_number failed");
    return std::string(buf, ptr);
}

ArmPrior parse_arm_prior(std::string_view expr) {
    const Call c = parse_call(expr);
    if (c.name == "beta") {
        require_args(c, 2, 2);
        return BetaPrior{c.args[0], c.args[1]};
    }
    if (c.name == "normal") {
        require_args(c, 2, 3);
        return NormalKnownVarPrior{c.args[0], c.args[1], c.args.size() == 3 ? c.args[2] : 1.0};
    }
    if (c.name == "nix") {
        require_args(c, 4, 4);
        return NixPrior{c.args[0], c.args[1], c.args[2], c.args[3]};
    }
    throw std::invalid_argument("unknown prior family '" + c.name + "'");
}

std::string format_arm_prior(const ArmPrior& prior) {
    const auto f = format_number;
    return std::visit(
        overloaded{[&](const BetaPrior& b) { return "beta(" + f(b.alpha) + ", " + f(b.beta) + ")"; },
                   [&](const NormalKnownVarPrior& n) {
                       return "normal(" + f(n.mu) + ", " + f(n.sigma0_sq) + ", " + f(n.sigma_sq) + ")";
                   },
                   [&](const NixPrior& p) {
                       return "nix(" + f(p.mu) + ", " + f(p.kappa) + ", " + f(p.nu) + ", " + f(p.sigma0_sq) + ")";
                   }},
        prior);
}

Scenario ScenarioFile::scenario_for(std::size_t variant) const {
    Scenario s = base;
    if (variants.empty()) return s;
    const PriorVariant& v = variants.at(variant);
    if (v.user) s.user = *v.user;
    if (v.user_surv) s.user_surv = *v.user_surv;
    s.name = base.name + " / " + v.label;
    return s;
}

std::string ScenarioFile::row_label(std::size_t variant) const {
    if (variants.empty()) {
        if (base.endpoint == Endpoint::survival) return "user prior";
        return format_arm_prior(base.user);
    }
    return variants.at(variant).label;
}

ScenarioFile parse_scenario(std::string_view text) {
    std::vector<SectionEntries> sections(1);
    int line_no = 0;
    std::set<std::string> seen_sections;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        bool in_quote = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quote = !in_quote;
            if (line[i] == '#' && !in_quote) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
            std::string_view inner = trim(line.substr(1, line.size() - 2));
            SectionEntries sec;
            sec.line = line_no;
            if (inner.rfind("variant", 0) == 0) {
                const auto q1 = inner.find('"'), q2 = inner.rfind('"');
                if (q1 == std::string_view::npos || q2 == q1) throw ParseError(line_no, "variant needs a quoted label");
                sec.name = "variant";
                sec.label = std::string(inner.substr(q1 + 1, q2 - q1 - 1));
                if (!seen_sections.insert("variant:" + sec.label).second)
                    throw ParseError(line_no, "duplicate variant '" + sec.label + "'");
            } else {
                static const std::set<std::string> known{"generating", "generating.control", "user", "user.control", "mcmc"};
                sec.name = std::string(inner);
                if (!known.count(sec.name)) throw ParseError(line_no, "unknown section [" + sec.name + "]");
                if (!seen_sections.insert(sec.name).second) throw ParseError(line_no, "duplicate section [" + sec.name + "]");
            }
            sections.push_back(std::move(sec));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ParseError(line_no, "empty key");
        for (const auto& e : sections.back().entries)
            if (std::get<0>(e) == key) throw ParseError(line_no, "duplicate key '" + key + "'");
        sections.back().entries.emplace_back(key, value, line_no);
    }

    ScenarioFile file;
    Scenario& s = file.base;
    bool have_endpoint = false;

    auto with_line = [](int line, auto&& fn) {
        try {
            fn();
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(line, e.what());
        }
    };

    // Arm sections: `prior` for closed-form endpoints, theta/kappa/beta for survival.
    auto read_arm = [&](const SectionEntries& sec, std::optional<ArmPrior>& arm, std::optional<SurvPrior>& surv,
                        const SurvPrior& surv_default) {
        for (const auto& [key, value, line] : sec.entries) {
            with_line(line, [&, &key = key, &value = value, line = line] {
                if (key == "prior") {
                    arm = parse_arm_prior(value);
                } else if (key == "theta" || key == "kappa" || key == "beta") {
                    if (!surv) surv = surv_default;
                    if (key == "theta") std::tie(surv->theta_shape, surv->theta_rate) = parse_gamma(value);
                    if (key == "kappa") std::tie(surv->kappa_shape, surv->kappa_rate) = parse_gamma(value);
                    if (key == "beta") std::tie(surv->beta_mean, surv->beta_var) = parse_normal2(value);
                } else {
                    throw ParseError(line, "unknown key '" + key + "' in [" + sec.name + "]");
                }
            });
        }
    };

    for (const auto& [key, value, line] : sections.front().entries) {
        with_line(line, [&, &key = key, &value = value, line = line] {
            if (key == "name") s.name = value;
            else if (key == "endpoint") s.endpoint = parse_endpoint(value), have_endpoint = true;
            else if (key == "design") s.design = parse_design(value);
            else if (key == "n_max") s.n_max = to_int<int>(value);
            else if (key == "interims") s.interims = parse_schedule(value);
            else if (key == "theta0") s.theta0 = to_double(value);
            else if (key == "delta") s.delta = to_double(value);
            else if (key == "rho") s.rho = to_double(value);
            else if (key == "cutoff") {
                file.cutoff_auto = value == "auto";
                if (!file.cutoff_auto) s.cutoff = to_double(value);
            } else if (key == "replicates") s.n_replicates = to_int<std::size_t>(value);
            else if (key == "seed") s.seed = to_int<std::uint64_t>(value);
            else if (key == "accrual_rate") s.accrual_rate = to_double(value);
            else if (key == "followup_months") s.followup_months = to_double(value);
            else if (key == "designs") {
                file.run_fixed = file.run_adaptive = false;
                for (auto d : split(value, ',')) {
                    if (d == "fixed") file.run_fixed = true;
                    else if (d == "adaptive") file.run_adaptive = true;
                    else throw std::invalid_argument("unknown design kind '" + std::string(d) + "'");
                }
            } else throw ParseError(line, "unknown key '" + key + "'");
        });
    }
    if (!have_endpoint) throw ParseError(0, "missing required key 'endpoint'");

    for (std::size_t i = 1; i < sections.size(); ++i) {
        const auto& sec = sections[i];
        std::optional<ArmPrior> arm;
        std::optional<SurvPrior> surv;
        if (sec.name == "mcmc") {
            for (const auto& [key, value, line] : sec.entries) {
                with_line(line, [&, &key = key, &value = value, line = line] {
                    McmcConfig& m = s.mcmc;
                    if (key == "n_iter") m.n_iter = to_int<int>(value);
                    else if (key == "burn_in") m.burn_in = to_int<int>(value);
                    else if (key == "thin") m.thin = to_int<int>(value);
                    else if (key == "scale_theta") m.scale_theta = to_double(value);
                    else if (key == "scale_kappa") m.scale_kappa = to_double(value);
                    else if (key == "scale_beta") m.scale_beta = to_double(value);
                    else if (key == "adapt") m.adapt_during_burnin = to_bool(value);
                    else throw ParseError(line, "unknown key '" + key + "' in [mcmc]");
                });
            }
            continue;
        }
        if (sec.name == "variant") {
            read_arm(sec, arm, surv, s.user_surv);
            file.variants.push_back({sec.label, arm, surv});
            continue;
        }
        const SurvPrior& surv_default = sec.name.rfind("generating", 0) == 0 ? s.generating_surv : s.user_surv;
        read_arm(sec, arm, surv, surv_default);
        if (sec.name.find(".control") != std::string::npos && surv)
            throw ParseError(sec.line, "survival trials take no [" + sec.name + "] section");
        if (sec.name == "generating") {
            if (arm) s.generating = *arm;
            if (surv) s.generating_surv = *surv;
        } else if (sec.name == "generating.control") {
            if (arm) s.generating_control = *arm;
        } else if (sec.name == "user") {
            if (arm) s.user = *arm;
            if (surv) s.user_surv = *surv;
        } else if (sec.name == "user.control") {
            if (arm) s.user_control = *arm;
        }
    }

    for (auto& v : file.variants)
        if (v.user_surv && s.endpoint != Endpoint::survival)
            throw ParseError(0, "variant '" + v.label + "' sets survival parameters on a " +
                                    std::string(to_string(s.endpoint)) + " endpoint");

    if (!file.run_fixed && !file.run_adaptive) throw ParseError(0, "designs must name fixed and/or adaptive");
    if (s.n_replicates < 1) throw ParseError(0, "replicates must be >= 1");
    {
        Scenario base = s;
        if (file.cutoff_auto) base.cutoff = 0.5;
        try {
            base.validate();
        } catch (const std::exception& e) {
            throw ParseError(0, e.what());
        }
    }
    for (std::size_t v = 0; v < file.n_rows(); ++v) {
        try {
            Scenario row = file.scenario_for(v);
            if (file.cutoff_auto) row.cutoff = 0.5;
            row.validate();
        } catch (const std::exception& e) {
            throw ParseError(0, file.variants.empty() ? e.what() : "variant '" + file.variants[v].label + "': " + e.what());
        }
    }
    return file;
}

ScenarioFile load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::string serialize_scenario(const ScenarioFile& file) {
    const Scenario& s = file.base;
    const bool surv = s.endpoint == Endpoint::survival;
    const auto f = format_number;
    std::ostringstream out;
    auto surv_lines = [&](const SurvPrior& p) {
        out << "theta = gamma(" << f(p.theta_shape) << ", " << f(p.theta_rate) << ")\n";
        out << "kappa = gamma(" << f(p.kappa_shape) << ", " << f(p.kappa_rate) << ")\n";
        out << "beta = normal(" << f(p.beta_mean) << ", " << f(p.beta_var) << ")\n";
    };

    out << "name = " << s.name << "\n";
    out << "endpoint = " << to_string(s.endpoint) << "\n";
    out << "design = " << to_string(s.design) << "\n";
    out << "n_max = " << s.n_max << "\n";
    out << "interims = ";
    if (s.interims.empty()) out << "none";
    for (std::size_t i = 0; i < s.interims.size(); ++i) out << (i ? ", " : "") << s.interims[i];
    out << "\n";
    out << "theta0 = " << f(s.theta0) << "\n";
    out << "delta = " << f(s.delta) << "\n";
    out << "rho = " << f(s.rho) << "\n";
    out << "cutoff = " << (file.cutoff_auto ? "auto" : f(s.cutoff)) << "\n";
    out << "replicates = " << s.n_replicates << "\n";
    out << "seed = " << s.seed << "\n";
    out << "accrual_rate = " << f(s.accrual_rate) << "\n";
    out << "followup_months = " << f(s.followup_months) << "\n";
    out << "designs = " << (file.run_fixed ? "fixed" : "") << (file.run_fixed && file.run_adaptive ? ", " : "")
        << (file.run_adaptive ? "adaptive" : "") << "\n";

    out << "\n[generating]\n";
    if (surv) surv_lines(s.generating_surv);
    else out << "prior = " << format_arm_prior(s.generating) << "\n";
    out << "\n[user]\n";
    if (surv) surv_lines(s.user_surv);
    else out << "prior = " << format_arm_prior(s.user) << "\n";
    if (!surv) {
        out << "\n[generating.control]\nprior = " << format_arm_prior(s.generating_control) << "\n";
        out << "\n[user.control]\nprior = " << format_arm_prior(s.user_control) << "\n";
    }
    const McmcConfig& m = s.mcmc;
    out << "\n[mcmc]\n"
        << "n_iter = " << m.n_iter << "\nburn_in = " << m.burn_in << "\nthin = " << m.thin << "\n"
        << "scale_theta = " << f(m.scale_theta) << "\nscale_kappa = " << f(m.scale_kappa) << "\n"
        << "scale_beta = " << f(m.scale_beta) << "\nadapt = " << (m.adapt_during_burnin ? "true" : "false") << "\n";

    for (const auto& v : file.variants) {
        out << "\n[variant " << quote_label(v.label) << "]\n";
        if (v.user) out << "prior = " << format_arm_prior(*v.user) << "\n";
        if (v.user_surv) surv_lines(*v.user_surv);
    }
    return out.str();
}

}  // namespace interimsim
