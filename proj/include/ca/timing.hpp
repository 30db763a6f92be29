#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ca/core.hpp"
#include "ca/rational.hpp"

namespace ca {

// ---------------------------------------------------------------------------
// output contracts

enum class ContractKind { StrictRealTime, SynchronousRealTime, LinearTime };

struct OutputContract {
    ContractKind kind = ContractKind::SynchronousRealTime;
    Rational k;  // LinearTime factor, > 1

    static OutputContract strict() { return {ContractKind::StrictRealTime, Rational(1)}; }
    static OutputContract synchronous() {
        return {ContractKind::SynchronousRealTime, Rational(1)};
    }
    static OutputContract linear(Rational k);

    // one (cell, time) site per cell 0..n-1
    std::vector<std::pair<size_t, size_t>> sites(size_t n) const;
    size_t horizon(size_t n) const;  // max site time
    std::string describe() const;
};

size_t strict_site_time(size_t cell, size_t n);

// ---------------------------------------------------------------------------
// function specs and verification

struct FunctionSpec {
    std::function<Word(const Word&)> oracle;       // length preserving
    std::function<bool(const Word&)> domain;       // word admissible?
    std::vector<std::string> input_alphabet;
    std::vector<std::string> output_alphabet;
};

struct SiteObservation {
    size_t cell = 0;
    size_t time = 0;
    std::string observed;
    std::string expected;
};

struct VerificationReport {
    Word word;
    Word expected;
    Word observed;
    std::vector<SiteObservation> sites;
    bool pass = false;
    std::string first_violation;  // empty when pass

    std::string to_json() const;
};

// Reads the output word of a diagram at the contract sites under projection.
Word read_output(const SpaceTimeDiagram& d, const OutputContract& c,
                 const std::function<std::string(State)>& project);

VerificationReport verify(const Automaton& a, const OutputContract& c,
                          const FunctionSpec& spec, const Word& w);

// ---------------------------------------------------------------------------
// synchronization layer
//
// Layer automaton whose cells, all present from time 0 between two borders,
// enter the distinguished FIRE state at exactly time n and never before.
// Wall distances are learned from the border waves; the second wave arrival
// starts a countdown equal to the first wave's distance. Exact for every
// n <= squad_capacity().

size_t squad_capacity();
const std::string& squad_fire_name();
const std::string& squad_quiescent_name();
const std::string& squad_general_name();

Automaton squad_layer();

struct SquadComponent {
    Automaton automaton;
    Configuration initial;  // generals at both extremities
};
SquadComponent fssp_component(size_t n);

// True iff the layer fires exactly at time n from the given start.
bool squad_fires_exactly(const Automaton& layer, const Configuration& start, size_t n);

// Squad slowed by an integer factor: fires at exactly factor*n.
Automaton slowed_squad_layer(unsigned factor);

// ---------------------------------------------------------------------------
// strict-site marker layer
//
// Cells enter state "M" at exactly their strict output site time
// max(c+1, n-c) and never else.

const std::string& marker_mark_name();
Automaton strict_marker_layer();

struct MarkerComponent {
    Automaton automaton;
    Configuration initial;
};
MarkerComponent strict_site_marker(size_t n);

// All (cell, time) sites at which the marker layer shows "M".
std::vector<std::pair<size_t, size_t>> marked_sites(const Automaton& layer,
                                                    const Configuration& start,
                                                    size_t horizon);

// ---------------------------------------------------------------------------
// layering

struct LayeredAutomaton {
    Automaton automaton;
    std::function<State(State)> data_part;
    std::function<State(State)> layer_part;
};

// Runs `layer` alongside `data` on the same cells; every input symbol maps to
// (data input, layer_init). Projection and output alphabet come from `data`.
LayeredAutomaton attach_layer(const Automaton& data, const Automaton& layer,
                              const std::string& layer_init);

// Wraps a strict-real-time computer so the latched strict outputs are
// presented simultaneously: the result passes the synchronous contract.
Automaton hold_to_synchronous(const Automaton& strict_algo);

}  // namespace ca
