#include "ergolab/blockprog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "ergolab/errors.hpp"

namespace ergolab {

BlockProgram::BlockProgram(std::vector<BlockRun> runs, int bit_budget)
    : runs_(std::move(runs)), bit_budget_(bit_budget) {
    rebuild_cum();
    validate();
}

void BlockProgram::rebuild_cum() {
    cum_.clear();
    std::int64_t total = 0;
    for (const auto& r : runs_) {
        total += static_cast<std::int64_t>(r.word.size()) * r.count;
        cum_.push_back(total);
    }
}

void BlockProgram::validate() const {
    if (runs_.empty()) throw ConfigError("block program: no runs");
    if (bit_budget_ < 1 || bit_budget_ > 62)
        throw ConfigError("block program: bit budget must be in [1,62]");
    for (const auto& r : runs_) {
        if (r.word.empty()) throw ConfigError("block program: empty word");
        if (r.count < 1) throw ConfigError("block program: run count must be >= 1");
        for (char c : r.word)
            if (c != '0' && c != '1') throw ConfigError("block program: word must be binary");
    }
}

BlockProgram BlockProgram::parse(const std::string& text, int bit_budget) {
    std::vector<BlockRun> runs;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == ';') { ++i; continue; }
        if (text[i] != '(') throw ConfigError("block program: expected '(' at position " + std::to_string(i));
        std::size_t close = text.find(')', i);
        if (close == std::string::npos) throw ConfigError("block program: unbalanced '('");
        BlockRun run;
        run.word = text.substr(i + 1, close - i - 1);
        i = close + 1;
        if (i >= text.size() || text[i] != 'x')
            throw ConfigError("block program: expected 'x' after word");
        ++i;
        std::size_t start = i;
        while (i < text.size() && text[i] != ';') ++i;
        run.count = std::strtoll(text.substr(start, i - start).c_str(), nullptr, 10);
        runs.push_back(std::move(run));
    }
    return BlockProgram(std::move(runs), bit_budget);
}

std::string BlockProgram::serialize() const {
    std::string out;
    for (std::size_t i = 0; i < runs_.size(); ++i) {
        if (i) out += ';';
        out += '(';
        out += runs_[i].word;
        out += ")x";
        out += std::to_string(runs_[i].count);
    }
    return out;
}

int BlockProgram::bit(std::int64_t i) const {
    auto it = std::upper_bound(cum_.begin(), cum_.end(), i);
    if (it == cum_.end()) {
        // past the explicit runs: the last word repeats forever
        const auto& w = runs_.back().word;
        std::int64_t base = cum_.size() >= 2 ? cum_[cum_.size() - 2] : 0;
        std::int64_t off = (i - base) % static_cast<std::int64_t>(w.size());
        return w[static_cast<std::size_t>(off)] - '0';
    }
    std::size_t run = static_cast<std::size_t>(it - cum_.begin());
    std::int64_t base = run == 0 ? 0 : cum_[run - 1];
    const auto& w = runs_[run].word;
    std::int64_t off = (i - base) % static_cast<std::int64_t>(w.size());
    return w[static_cast<std::size_t>(off)] - '0';
}

double BlockProgram::value_at(std::int64_t offset) const {
    std::uint64_t window = 0;
    for (int k = 0; k < bit_budget_; ++k) window = (window << 1) | static_cast<std::uint64_t>(bit(offset + k));
    return static_cast<double>(window) * std::ldexp(1.0, -bit_budget_);
}

BlockProgram BlockProgram::shifted(std::int64_t k) const {
    std::vector<BlockRun> out;
    std::int64_t remaining = k;
    for (std::size_t i = 0; i < runs_.size(); ++i) {
        const auto& r = runs_[i];
        const bool last = (i + 1 == runs_.size());
        std::int64_t wlen = static_cast<std::int64_t>(r.word.size());
        std::int64_t len = wlen * r.count;
        if (!last && remaining >= len) {
            remaining -= len;
            continue;
        }
        // The shift lands inside this run (or inside the infinite tail of the
        // last run, where only remaining mod |word| matters).
        std::int64_t whole = remaining / wlen;
        std::int64_t inword = remaining % wlen;
        std::int64_t consumed = whole + (inword > 0 ? 1 : 0);
        if (inword > 0)
            out.push_back(BlockRun{r.word.substr(static_cast<std::size_t>(inword)), 1});
        std::int64_t left = r.count - consumed;
        if (last) left = std::max<std::int64_t>(left, 1);
        if (left > 0) out.push_back(BlockRun{r.word, left});
        for (std::size_t j = i + 1; j < runs_.size(); ++j) out.push_back(runs_[j]);
        break;
    }
    if (out.empty()) out.push_back(BlockRun{runs_.back().word, 1});
    return BlockProgram(std::move(out), bit_budget_);
}

std::vector<std::uint8_t> BlockProgram::materialize(std::int64_t n) const {
    std::vector<std::uint8_t> bits;
    bits.reserve(static_cast<std::size_t>(n));
    std::int64_t produced = 0;
    for (const auto& r : runs_) {
        for (std::int64_t c = 0; c < r.count && produced < n; ++c)
            for (char ch : r.word) {
                if (produced >= n) break;
                bits.push_back(static_cast<std::uint8_t>(ch - '0'));
                ++produced;
            }
        if (produced >= n) break;
    }
    const auto& w = runs_.back().word;
    while (produced < n) {
        for (char ch : w) {
            if (produced >= n) break;
            bits.push_back(static_cast<std::uint8_t>(ch - '0'));
            ++produced;
        }
    }
    return bits;
}

}  // namespace ergolab
