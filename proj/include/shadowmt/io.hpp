#pragma once

#include <iosfwd>
#include <string>

#include "shadowmt/closed_set.hpp"
#include "shadowmt/lift.hpp"
#include "shadowmt/measure.hpp"
#include "shadowmt/plan.hpp"

namespace shadowmt {

// Measures:  {"atoms": [{"x": -1, "m": 0.5}, ...]}
// Lifts:     {"pieces": [{"u0": 0, "u1": 0.5, "conditional": {measure}}, ...]}
// Sets:      {"points": [...], "intervals": [[a, b], ...], "rays": {"left": a|null, "right": b|null}}
//            the whole line is written as the interval ["-inf", "inf"]
// All parsers throw Error(Parse) on malformed input.

std::string measure_to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const std::string& text);

std::string lift_to_json(const Lift& l);
Lift lift_from_json(const std::string& text);

std::string closed_set_to_json(const ClosedSet& s);
ClosedSet closed_set_from_json(const std::string& text);

/// 17 significant digits, so the text reads back to the same double;
/// "inf" / "-inf" for infinities.
std::string format_double(double v);

// CSV with fixed headers: "x,y,mass", "u0,u1,x,y,mass", "u,component_type,a,b".
void write_coupling_csv(std::ostream& out, const Coupling& c);
Coupling read_coupling_csv(std::istream& in);
void write_lifted_csv(std::ostream& out, const LiftedCoupling& lc);
LiftedCoupling read_lifted_csv(std::istream& in);
void write_barrier_csv(std::ostream& out, const Barrier& b);
Barrier read_barrier_csv(std::istream& in);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

} // namespace shadowmt
