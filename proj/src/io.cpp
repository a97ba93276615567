#include "shadowmt/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "shadowmt/error.hpp"

namespace shadowmt {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
}

double number(const json& j, const char* what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
    }
    throw Error(ErrorKind::Parse, std::string("expected a number for ") + what);
}

json bound(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return v;
}

json atoms_json(const DiscreteMeasure& m) {
    json a = json::array();
    for (const Atom& at : m.atoms()) a.push_back({{"x", at.x}, {"m", at.m}});
    return a;
}

DiscreteMeasure atoms_from(const json& a) {
    if (!a.is_array()) throw Error(ErrorKind::Parse, "\"atoms\" must be an array");
    std::vector<Atom> out;
    for (const json& e : a) {
        if (e.is_object() && e.contains("x") && e.contains("m"))
            out.push_back({number(e["x"], "x"), number(e["m"], "m")});
        else if (e.is_array() && e.size() == 2)
            out.push_back({number(e[0], "x"), number(e[1], "m")});
        else
            throw Error(ErrorKind::Parse, "atom must be {\"x\", \"m\"} or [x, m]");
    }
    return DiscreteMeasure(std::move(out));
}

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw Error(ErrorKind::Parse, std::string("missing field \"") + name + "\"");
    return j[name];
}

double parse_double(const std::string& s) {
    if (s == "inf" || s == "+inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw Error(ErrorKind::Parse, "bad number '" + s + "'");
    return v;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    return out;
}

// Rows after the expected header, each with exactly `cols` cells.
std::vector<std::vector<std::string>> read_rows(std::istream& in, const std::string& header, std::size_t cols) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw Error(ErrorKind::Parse, "expected header '" + header + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split_line(line);
        if (cells.size() != cols) throw Error(ErrorKind::Parse, "wrong number of cells in '" + line + "'");
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string measure_to_json(const DiscreteMeasure& m) { return json{{"atoms", atoms_json(m)}}.dump(2); }

DiscreteMeasure measure_from_json(const std::string& text) {
    const json j = parse(text);
    try {
        return atoms_from(field(j, "atoms"));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Parse) throw;
        throw Error(ErrorKind::Parse, e.what());
    }
}

std::string lift_to_json(const Lift& l) {
    json pieces = json::array();
    for (const LiftPiece& p : l.pieces())
        pieces.push_back({{"u0", p.u0}, {"u1", p.u1}, {"conditional", {{"atoms", atoms_json(p.conditional)}}}});
    return json{{"pieces", pieces}}.dump(2);
}

Lift lift_from_json(const std::string& text) {
    const json j = parse(text);
    const json& pieces = field(j, "pieces");
    if (!pieces.is_array()) throw Error(ErrorKind::Parse, "\"pieces\" must be an array");
    std::vector<LiftPiece> out;
    for (const json& p : pieces)
        out.push_back({number(field(p, "u0"), "u0"), number(field(p, "u1"), "u1"),
                       atoms_from(field(field(p, "conditional"), "atoms"))});
    return Lift(std::move(out));
}

std::string closed_set_to_json(const ClosedSet& s) {
    json points = json::array(), intervals = json::array();
    json rays{{"left", nullptr}, {"right", nullptr}};
    for (const Component& c : s.components()) {
        if (std::isinf(c.lo) && std::isinf(c.hi))
            intervals.push_back({bound(c.lo), bound(c.hi)});
        else if (std::isinf(c.lo))
            rays["left"] = c.hi;
        else if (std::isinf(c.hi))
            rays["right"] = c.lo;
        else if (c.is_point())
            points.push_back(c.lo);
        else
            intervals.push_back({c.lo, c.hi});
    }
    return json{{"points", points}, {"intervals", intervals}, {"rays", rays}}.dump(2);
}

ClosedSet closed_set_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.is_object()) throw Error(ErrorKind::Parse, "closed set must be an object");
    std::vector<Component> out;
    if (j.contains("points")) {
        if (!j["points"].is_array()) throw Error(ErrorKind::Parse, "\"points\" must be an array");
        for (const json& p : j["points"]) {
            const double x = number(p, "point");
            out.push_back({x, x});
        }
    }
    if (j.contains("intervals")) {
        if (!j["intervals"].is_array()) throw Error(ErrorKind::Parse, "\"intervals\" must be an array");
        for (const json& c : j["intervals"]) {
            if (!c.is_array() || c.size() != 2) throw Error(ErrorKind::Parse, "interval must be [a, b]");
            out.push_back({number(c[0], "a"), number(c[1], "b")});
        }
    }
    if (j.contains("rays")) {
        const json& r = j["rays"];
        if (!r.is_object()) throw Error(ErrorKind::Parse, "\"rays\" must be an object");
        if (r.contains("left") && !r["left"].is_null()) out.push_back({-INFINITY, number(r["left"], "left")});
        if (r.contains("right") && !r["right"].is_null()) out.push_back({number(r["right"], "right"), INFINITY});
    }
    try {
        return ClosedSet(std::move(out));
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
}

void write_coupling_csv(std::ostream& out, const Coupling& c) {
    out << "x,y,mass\n";
    for (const PlanEntry& e : c.entries())
        out << format_double(e.x) << ',' << format_double(e.y) << ',' << format_double(e.mass) << '\n';
}

Coupling read_coupling_csv(std::istream& in) {
    std::vector<PlanEntry> e;
    for (const auto& r : read_rows(in, "x,y,mass", 3))
        e.push_back({parse_double(r[0]), parse_double(r[1]), parse_double(r[2])});
    return Coupling(std::move(e));
}

void write_lifted_csv(std::ostream& out, const LiftedCoupling& lc) {
    out << "u0,u1,x,y,mass\n";
    for (const Slice& s : lc.slices()) {
        const std::string prefix = format_double(s.u0) + ',' + format_double(s.u1) + ',';
        for (const PlanEntry& e : s.plan.entries())
            out << prefix << format_double(e.x) << ',' << format_double(e.y) << ',' << format_double(e.mass) << '\n';
    }
}

LiftedCoupling read_lifted_csv(std::istream& in) {
    std::vector<Slice> slices;
    std::vector<PlanEntry> cur;
    double u0 = 0.0, u1 = 0.0;
    for (const auto& r : read_rows(in, "u0,u1,x,y,mass", 5)) {
        const double a = parse_double(r[0]), b = parse_double(r[1]);
        if (!cur.empty() && (a != u0 || b != u1)) {
            slices.push_back({u0, u1, Coupling(std::move(cur))});
            cur.clear();
        }
        u0 = a;
        u1 = b;
        cur.push_back({parse_double(r[2]), parse_double(r[3]), parse_double(r[4])});
    }
    if (!cur.empty()) slices.push_back({u0, u1, Coupling(std::move(cur))});
    return LiftedCoupling(std::move(slices));
}

void write_barrier_csv(std::ostream& out, const Barrier& b) {
    out << "u,component_type,a,b\n";
    for (std::size_t k = 0; k < b.grid.size(); ++k)
        for (const Component& c : b.sections[k].components()) {
            const char* type = c.is_point() ? "point" : (std::isinf(c.lo) || std::isinf(c.hi)) ? "ray" : "interval";
            out << format_double(b.grid[k]) << ',' << type << ',' << format_double(c.lo) << ','
                << format_double(c.hi) << '\n';
        }
}

Barrier read_barrier_csv(std::istream& in) {
    Barrier b;
    std::vector<Component> cur;
    for (const auto& r : read_rows(in, "u,component_type,a,b", 4)) {
        if (r[1] != "point" && r[1] != "interval" && r[1] != "ray")
            throw Error(ErrorKind::Parse, "unknown component type '" + r[1] + "'");
        const double u = parse_double(r[0]);
        if (b.grid.empty() || u != b.grid.back()) {
            if (!b.grid.empty()) b.sections.emplace_back(std::move(cur));
            cur.clear();
            b.grid.push_back(u);
        }
        cur.push_back({parse_double(r[2]), parse_double(r[3])});
    }
    if (!b.grid.empty()) b.sections.emplace_back(std::move(cur));
    return b;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Parse, "cannot write '" + path + "'");
    out << contents;
}

} // namespace shadowmt
