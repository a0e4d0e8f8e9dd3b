#include "sarsim/fuzzy.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sar {

double TrapezoidMf::membership(double x) const {
    if (x < a) return 0.0;
    if (x < b) return (x - a) / (b - a);
    if (x <= c) return 1.0;
    if (x < d) return (d - x) / (d - c);
    return 0.0;
}

int LinguisticVariable::term_index(const std::string& term_name) const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].name == term_name) return static_cast<int>(i);
    }
    return -1;
}

namespace {

LinguisticVariable three_term_input(const std::string& name, double lo, double hi,
                                    const std::array<std::string, 3>& names) {
    // Canonical 3-term layout on the normalized universe:
    //   low    (_, 0, 0.2, 0.45)   crisp left edge
    //   medium (0.25, 0.45, 0.55, 0.75)
    //   high   (0.55, 0.8, 1, _)   crisp right edge
    const double w = hi - lo;
    LinguisticVariable v;
    v.name = name;
    v.lo = lo;
    v.hi = hi;
    v.terms = {
        {names[0], {lo, lo, lo + 0.20 * w, lo + 0.45 * w}},
        {names[1], {lo + 0.25 * w, lo + 0.45 * w, lo + 0.55 * w, lo + 0.75 * w}},
        {names[2], {lo + 0.55 * w, lo + 0.80 * w, hi, hi}},
    };
    return v;
}

LinguisticVariable priority_output() {
    // Five uniform trapezoids centered at 10/30/50/70/90 on [0,100];
    // plateau half-width 5, feet half-width 15. The outer feet overhang the
    // universe and get truncated by the discretization.
    LinguisticVariable v;
    v.name = "priority";
    v.lo = 0.0;
    v.hi = 100.0;
    const std::array<std::string, 5> names = {"VeryLow", "Low", "Medium", "High", "VeryHigh"};
    for (int i = 0; i < 5; ++i) {
        const double center = 10.0 + 20.0 * i;
        v.terms.push_back({names[static_cast<std::size_t>(i)],
                           {center - 15.0, center - 5.0, center + 5.0, center + 15.0}});
    }
    return v;
}

struct RuleSpec {
    const char* e;
    const char* h;
    const char* c;
    const char* p;
};

constexpr RuleSpec kStandardRules[27] = {
    {"Low", "Stable", "Known", "VeryLow"},
    {"Low", "Medium", "Known", "VeryLow"},
    {"Low", "Stable", "Partial", "VeryLow"},
    {"Low", "Medium", "Partial", "Low"},
    {"Low", "Critical", "Known", "Low"},
    {"Medium", "Medium", "Partial", "Low"},
    {"Medium", "Critical", "Known", "Low"},
    {"Low", "Stable", "Unknown", "Low"},
    {"Medium", "Stable", "Known", "Medium"},
    {"Medium", "Medium", "Known", "Medium"},
    {"Medium", "Stable", "Partial", "Medium"},
    {"High", "Stable", "Partial", "Medium"},
    {"High", "Medium", "Known", "Medium"},
    {"High", "Critical", "Known", "Medium"},
    {"Low", "Critical", "Partial", "Medium"},
    {"Low", "Medium", "Unknown", "Medium"},
    {"High", "Stable", "Known", "High"},
    {"Medium", "Stable", "Unknown", "High"},
    {"Medium", "Medium", "Unknown", "High"},
    {"High", "Stable", "Unknown", "High"},
    {"Low", "Critical", "Unknown", "High"},
    {"Medium", "Critical", "Partial", "VeryHigh"},
    {"High", "Medium", "Partial", "VeryHigh"},
    {"Medium", "Critical", "Unknown", "VeryHigh"},
    {"High", "Medium", "Unknown", "VeryHigh"},
    {"High", "Critical", "Partial", "VeryHigh"},
    {"High", "Critical", "Unknown", "VeryHigh"},
};

RuleBase build_standard() {
    RuleBase rb;
    rb.evidence = three_term_input("evidence", 0.0, 1.0, {"Low", "Medium", "High"});
    rb.health = three_term_input("health", 0.0, 100.0, {"Critical", "Medium", "Stable"});
    rb.certainty = three_term_input("certainty", 0.0, 1.0, {"Unknown", "Partial", "Known"});
    rb.priority = priority_output();
    for (const auto& spec : kStandardRules) {
        FuzzyRule r;
        r.evidence = rb.evidence.term_index(spec.e);
        r.health = rb.health.term_index(spec.h);
        r.certainty = rb.certainty.term_index(spec.c);
        r.priority = rb.priority.term_index(spec.p);
        rb.rules.push_back(r);
    }
    rb.validate();
    return rb;
}

} // namespace

const RuleBase& RuleBase::standard() {
    static const RuleBase rb = build_standard();
    return rb;
}

void RuleBase::validate() const {
    auto check_var = [](const LinguisticVariable& v, std::size_t expected) {
        if (v.terms.size() != expected) {
            throw ConfigError("fuzzy variable '" + v.name + "': expected " +
                              std::to_string(expected) + " terms");
        }
        if (!(v.lo < v.hi)) {
            throw ConfigError("fuzzy variable '" + v.name + "': empty universe");
        }
        for (const auto& t : v.terms) {
            const auto& m = t.mf;
            if (!(m.a <= m.b && m.b <= m.c && m.c <= m.d)) {
                throw ConfigError("fuzzy term '" + v.name + "." + t.name +
                                  "': parameters must satisfy a <= b <= c <= d");
            }
        }
    };
    check_var(evidence, 3);
    check_var(health, 3);
    check_var(certainty, 3);
    check_var(priority, 5);

    if (rules.size() != 27) {
        throw ConfigError("rule base must contain exactly 27 rules, got " +
                          std::to_string(rules.size()));
    }
    std::array<int, 27> seen{};
    for (const auto& r : rules) {
        if (r.evidence < 0 || r.evidence > 2 || r.health < 0 || r.health > 2 ||
            r.certainty < 0 || r.certainty > 2 || r.priority < 0 || r.priority > 4) {
            throw ConfigError("rule refers to an unknown term");
        }
        const int key = r.evidence * 9 + r.health * 3 + r.certainty;
        if (seen[static_cast<std::size_t>(key)]++) {
            throw ConfigError("duplicate rule for one antecedent combination");
        }
    }
    for (int key = 0; key < 27; ++key) {
        if (!seen[static_cast<std::size_t>(key)]) {
            throw ConfigError("rule base is not a complete 3x3x3 cover");
        }
    }
}

namespace {

constexpr int kCentroidPoints = 1000; // 1001 samples including both ends

std::array<double, 3> input_memberships(const LinguisticVariable& v, double x) {
    return {v.terms[0].mf.membership(x), v.terms[1].mf.membership(x),
            v.terms[2].mf.membership(x)};
}

} // namespace

double infer_priority(double evidence, double health, double certainty,
                      const RuleBase& rules) {
    const auto mu_e = input_memberships(rules.evidence, evidence);
    const auto mu_h = input_memberships(rules.health, health);
    const auto mu_c = input_memberships(rules.certainty, certainty);

    // Strongest firing per output term; clipping + max-aggregation then only
    // needs the 5 term strengths instead of all 27 rules.
    std::array<double, 5> strength{};
    double total = 0.0;
    for (const auto& r : rules.rules) {
        const double w = std::min({mu_e[static_cast<std::size_t>(r.evidence)],
                                   mu_h[static_cast<std::size_t>(r.health)],
                                   mu_c[static_cast<std::size_t>(r.certainty)]});
        auto& s = strength[static_cast<std::size_t>(r.priority)];
        s = std::max(s, w);
        total += w;
    }
    if (total == 0.0) {
        throw ConfigError("fuzzy inference: no rule fired (membership gap)");
    }

    const double lo = rules.priority.lo;
    const double w = rules.priority.hi - lo;
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j <= kCentroidPoints; ++j) {
        const double xn = static_cast<double>(j) / kCentroidPoints;
        const double x = lo + xn * w;
        double mu = 0.0;
        for (std::size_t t = 0; t < 5; ++t) {
            if (strength[t] <= mu) continue;
            mu = std::max(mu, std::min(strength[t],
                                       rules.priority.terms[t].mf.membership(x)));
        }
        num += xn * mu;
        den += mu;
    }
    return lo + (num / den) * w;
}

std::optional<double> PriorityMap::value(const Cell& c) const {
    const long long key = (static_cast<long long>(c.y) << 20) | static_cast<long long>(c.x);
    auto it = rho_.find(key);
    if (it == rho_.end()) return std::nullopt;
    return it->second;
}

double PriorityMap::value_or_zero(const Cell& c) const {
    const long long key = (static_cast<long long>(c.y) << 20) | static_cast<long long>(c.x);
    auto it = rho_.find(key);
    return it == rho_.end() ? 0.0 : it->second;
}

void PriorityMap::set(const Cell& c, double rho) {
    rho_[(static_cast<long long>(c.y) << 20) | static_cast<long long>(c.x)] = rho;
}

std::vector<std::pair<Cell, double>> PriorityMap::entries() const {
    std::vector<std::pair<Cell, double>> out;
    out.reserve(rho_.size());
    for (const auto& [key, rho] : rho_) {
        out.push_back({Cell{static_cast<int>(key & 0xfffff), static_cast<int>(key >> 20)}, rho});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::pair{a.first.y, a.first.x} < std::pair{b.first.y, b.first.x};
    });
    return out;
}

PriorityMap build_priority_map(const RobotState& robot,
                               const ScanCertaintyMap& local_certainty,
                               const LocalVictimMap& local_victims,
                               const std::vector<const Victim*>& victims_in_field,
                               const OccupancyMap& known_obstacles,
                               const GridEnvironment& env,
                               const RuleBase& rules) {
    PriorityMap out;
    for (const Cell& cell : perception_field(robot, env)) {
        if (known_obstacles.contains(cell)) continue;
        const double e = victim_evidence(robot, cell, victims_in_field);
        const auto* sighting = local_victims.sighting_at(cell);
        // a sighting the robot has already visited no longer needs care
        const double h = sighting && !sighting->visited ? sighting->health : 100.0;
        const double c = local_certainty.at(cell);
        out.set(cell, infer_priority(e, h, c, rules));
    }
    return out;
}

namespace {

void apply_mf_line(RuleBase& rb, const std::string& var, const std::string& term,
                   const TrapezoidMf& mf, int line_no) {
    LinguisticVariable* v = nullptr;
    if (var == "evidence") v = &rb.evidence;
    else if (var == "health") v = &rb.health;
    else if (var == "certainty") v = &rb.certainty;
    else if (var == "priority") v = &rb.priority;
    if (!v) {
        throw ConfigError("rules file line " + std::to_string(line_no) +
                          ": unknown variable '" + var + "'");
    }
    const int idx = v->term_index(term);
    if (idx < 0) {
        throw ConfigError("rules file line " + std::to_string(line_no) +
                          ": unknown term '" + var + "." + term + "'");
    }
    v->terms[static_cast<std::size_t>(idx)].mf = mf;
}

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

RuleBase load_rule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open rules file: " + path);
    }
    RuleBase rb = RuleBase::standard();
    rb.rules.clear();

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;

        std::istringstream ss(line);
        std::string kind;
        ss >> kind;
        if (kind == "mf") {
            std::string var, term;
            TrapezoidMf mf;
            if (!(ss >> var >> term >> mf.a >> mf.b >> mf.c >> mf.d)) {
                throw ConfigError("rules file line " + std::to_string(line_no) +
                                  ": expected 'mf <var> <term> <a> <b> <c> <d>'");
            }
            apply_mf_line(rb, var, term, mf, line_no);
        } else if (kind == "rule") {
            // rule E, H, C -> P
            std::string rest;
            std::getline(ss, rest);
            const auto arrow = rest.find("->");
            if (arrow == std::string::npos) {
                throw ConfigError("rules file line " + std::to_string(line_no) +
                                  ": missing '->'");
            }
            std::string lhs = rest.substr(0, arrow);
            const std::string rhs = strip(rest.substr(arrow + 2));
            std::array<std::string, 3> ante;
            std::size_t part = 0;
            std::size_t start = 0;
            while (part < 3) {
                const auto comma = lhs.find(',', start);
                const std::string tok =
                    strip(comma == std::string::npos ? lhs.substr(start)
                                                     : lhs.substr(start, comma - start));
                ante[part++] = tok;
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            if (part != 3 || ante[2].empty()) {
                throw ConfigError("rules file line " + std::to_string(line_no) +
                                  ": expected 'rule E, H, C -> P'");
            }
            FuzzyRule r;
            r.evidence = rb.evidence.term_index(ante[0]);
            r.health = rb.health.term_index(ante[1]);
            r.certainty = rb.certainty.term_index(ante[2]);
            r.priority = rb.priority.term_index(rhs);
            if (r.evidence < 0 || r.health < 0 || r.certainty < 0 || r.priority < 0) {
                throw ConfigError("rules file line " + std::to_string(line_no) +
                                  ": unknown term name");
            }
            rb.rules.push_back(r);
        } else {
            throw ConfigError("rules file line " + std::to_string(line_no) +
                              ": unknown directive '" + kind + "'");
        }
    }
    rb.validate();
    return rb;
}

void save_rule_file(const RuleBase& rb, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write rules file: " + path);
    }
    out << "# membership parameters: mf <variable> <term> <a> <b> <c> <d>\n";
    for (const auto* v : {&rb.evidence, &rb.health, &rb.certainty, &rb.priority}) {
        for (const auto& t : v->terms) {
            out << "mf " << v->name << ' ' << t.name << ' ' << t.mf.a << ' '
                << t.mf.b << ' ' << t.mf.c << ' ' << t.mf.d << '\n';
        }
    }
    out << "\n# rules: rule <evidence>, <health>, <certainty> -> <priority>\n";
    for (const auto& r : rb.rules) {
        out << "rule " << rb.evidence.terms[static_cast<std::size_t>(r.evidence)].name
            << ", " << rb.health.terms[static_cast<std::size_t>(r.health)].name << ", "
            << rb.certainty.terms[static_cast<std::size_t>(r.certainty)].name << " -> "
            << rb.priority.terms[static_cast<std::size_t>(r.priority)].name << '\n';
    }
}

} // namespace sar
