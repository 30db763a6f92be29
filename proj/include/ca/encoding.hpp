#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "ca/core.hpp"

namespace ca {

// Interns fixed-width integer cell records as automaton states. Constructions
// with structured per-cell fields (channels, counters, flags) encode through
// one of these; labels stay readable for diagram dumps.
template <size_t N>
class RecordCodec {
  public:
    using Record = std::array<int32_t, N>;

    explicit RecordCodec(std::shared_ptr<StateTable> states, std::string prefix)
        : states_(std::move(states)), prefix_(std::move(prefix)) {}

    State encode(const Record& rec) {
        std::string label = prefix_;
        for (size_t i = 0; i < N; ++i) {
            label += i ? "," : ":";
            label += std::to_string(rec[i]);
        }
        State id = states_->intern(label);
        std::lock_guard<std::mutex> lock(mu_);
        if (id >= records_.size()) records_.resize(id + 1);
        records_[id] = rec;
        return id;
    }

    Record decode(State s) const {
        std::lock_guard<std::mutex> lock(mu_);
        return records_[s];
    }

    StateTable& states() { return *states_; }

  private:
    std::shared_ptr<StateTable> states_;
    std::string prefix_;
    mutable std::mutex mu_;
    std::vector<Record> records_;
};

}  // namespace ca
