#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ca/algorithms.hpp"
#include "ca/core.hpp"
#include "ca/rational.hpp"
#include "ca/timing.hpp"

namespace ca {

// ---------------------------------------------------------------------------
// rational space-time geometry (validator side)

struct TimeBound {
    Rational a;  // t(n) = a*n + b
    Rational b;

    Rational at(size_t n) const {
        return a * Rational(static_cast<long long>(n)) + b;
    }
};

struct RationalSite {
    Rational cell;
    Rational time;
    State state = 0;
};

struct SiteLink {
    size_t from = 0;  // indices into the site list; from is one step earlier
    size_t to = 0;
};

struct RationalDiagram {
    std::vector<RationalSite> sites;
    std::vector<SiteLink> links;

    // every link must satisfy |dc| <= dt
    bool feasible() const;
};

RationalDiagram diagram_from_run(const SpaceTimeDiagram& d);

struct Mat2 {
    Rational a, b, c, d;  // row major: [[a, b], [c, d]]
    friend Mat2 operator*(const Mat2& x, const Mat2& y);
    friend bool operator==(const Mat2& x, const Mat2& y);
};

enum class ScalingKind { Diagonal, AntiDiagonal, Uniform };

struct Scaling {
    ScalingKind kind = ScalingKind::Uniform;
    Rational ratio;
    Rational origin_cell;
    Rational origin_time;

    Mat2 matrix() const;
    // affine action about the origin site
    std::pair<Rational, Rational> apply(const Rational& cell, const Rational& time) const;

    static Scaling diagonal(Rational r);                     // origin <0,1>
    static Scaling anti_diagonal(Rational r, size_t n);      // origin <n-1,1>
    static Scaling uniform(Rational r, size_t n);            // origin <(n-1)/2,(n+1)/2>
};

// Applies the scaling to every site inside the region; links between two
// mapped sites are re-derived and checked for feasibility.
RationalDiagram scale_diagram(const RationalDiagram& d, const Scaling& s,
                              const std::function<bool(const Rational&, const Rational&)>& region);

// links (-1,1), (0,1), (1,1) as mapped by the diagonal scaling
std::vector<std::pair<Rational, Rational>> mapped_links(const Scaling& s);

// output segment [(1-r)(n-1)/2, (1+r)(n-1)/2] at time 1+(1+r)(n-1)/2+r*t(n)
struct OutputSegment {
    Rational lo, hi;
    Rational time;
};
OutputSegment output_segment(size_t n, Rational r, const TimeBound& t);

// ---------------------------------------------------------------------------
// executable constructions

struct SpedUp {
    Automaton automaton;
    OutputContract contract;  // synchronous sites at n + ceil(r * t(n))
    FunctionSpec spec;
    Rational ratio;
};

// Grouped linear acceleration: r = 1/q. The argument automaton must pass a
// synchronous contract at time n + t(n); the result passes it at
// n + ceil(r t(n)). The declared bound is verified on sample words first.
SpedUp speedup(const Automaton& a, const FunctionSpec& spec, const TimeBound& t,
               Rational r, bool verify_bound = true);

// contract sites (i, n + ceil(r*t(n)))
std::vector<std::pair<size_t, size_t>> accelerated_sites(size_t n, Rational r,
                                                         const TimeBound& t);
size_t accelerated_time(size_t n, Rational r, const TimeBound& t);

// mirror followed by parking; passes the synchronous contract at 2n
// (t(n) = n), the reference input of the acceleration tests
Construction slowed_mirror(const std::vector<std::string>& alphabet);

// Composition of linear-time computers: runs a, synchronizes on a slowed
// squad firing at exactly gate*n, then feeds the parked output to b.
struct ComposedLinear {
    Automaton automaton;
    OutputContract contract;
    FunctionSpec spec;
    unsigned gate = 0;  // squad slowdown factor
};

ComposedLinear compose_linear(const Automaton& a, const OutputContract& ca,
                              const FunctionSpec& sa, const Automaton& b,
                              const OutputContract& cb, const FunctionSpec& sb);

}  // namespace ca
