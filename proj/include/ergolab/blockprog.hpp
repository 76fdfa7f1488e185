#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ergolab {

// One run of a block program: `word` repeated `count` times.
struct BlockRun {
    std::string word;     // finite binary word, characters '0'/'1'
    std::int64_t count = 1;
};

// A deterministic generator of an infinite binary sequence: the runs in order,
// then the last word repeated forever. The induced real point at offset j is
// 0.b_j b_{j+1} ... truncated at the bit budget B, so iteration of the doubling
// map is an exact shift while evaluation of test functions happens on dyadic
// rationals with denominator 2^B.
class BlockProgram {
public:
    BlockProgram() = default;
    BlockProgram(std::vector<BlockRun> runs, int bit_budget = 53);

    // Compact text form: "(word)x(count);(word)x(count);..."
    static BlockProgram parse(const std::string& text, int bit_budget = 53);
    std::string serialize() const;

    int bit_budget() const { return bit_budget_; }
    const std::vector<BlockRun>& runs() const { return runs_; }

    // Total bits covered by the explicit runs (the tail repeats beyond this).
    std::int64_t run_bits() const { return cum_.empty() ? 0 : cum_.back(); }

    int bit(std::int64_t i) const;

    // Real value of the point at shift `offset`: sum_{k<B} bit(offset+k) 2^-(k+1).
    double value_at(std::int64_t offset) const;

    // The program generating the sequence with the first k bits dropped.
    BlockProgram shifted(std::int64_t k) const;

    // First n bits, materialized (cheap buffer for orbit streaming).
    std::vector<std::uint8_t> materialize(std::int64_t n) const;

private:
    std::vector<BlockRun> runs_;
    std::vector<std::int64_t> cum_;  // cumulative run lengths
    int bit_budget_ = 53;

    void rebuild_cum();
    void validate() const;
};

}  // namespace ergolab
