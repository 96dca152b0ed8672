#include "attain/sequence.hpp"

#include <string>

#include "attain/errors.hpp"

namespace attain {

namespace {

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::InvalidSpec, message);
}

}  // namespace

std::string_view to_string(Approach approach) {
  switch (approach) {
    case Approach::Below: return "below";
    case Approach::Exact: return "exact";
    case Approach::Above: return "above";
  }
  return "unknown";
}

Strand::Strand(Rational limit, Approach approach, Rational amplitude, Rational ratio)
    : limit_(std::move(limit)),
      approach_(approach),
      amplitude_(std::move(amplitude)),
      ratio_(std::move(ratio)) {
  if (limit_.sign() < 0) invalid("strand limit must be nonnegative");
  if (approach_ == Approach::Exact) return;
  if (amplitude_.sign() <= 0) invalid("amplitude must be positive");
  if (ratio_.sign() <= 0 || ratio_ >= Rational(1)) invalid("ratio must lie in (0,1)");
  if (approach_ == Approach::Below && limit_ - amplitude_ < Rational(0)) {
    invalid("below strand needs limit - amplitude >= 0");
  }
}

Strand Strand::exact(Rational limit) {
  return Strand(std::move(limit), Approach::Exact, Rational(0), Rational(0));
}

Strand Strand::below(Rational limit, Rational amplitude, Rational ratio) {
  return Strand(std::move(limit), Approach::Below, std::move(amplitude), std::move(ratio));
}

Strand Strand::above(Rational limit, Rational amplitude, Rational ratio) {
  return Strand(std::move(limit), Approach::Above, std::move(amplitude), std::move(ratio));
}

Rational Strand::deviation(std::uint64_t occurrence) const {
  if (!is_geometric()) return Rational(0);
  return amplitude_ * ratio_.pow(occurrence);
}

Rational Strand::value(std::uint64_t occurrence) const {
  switch (approach_) {
    case Approach::Below: return limit_ - deviation(occurrence);
    case Approach::Above: return limit_ + deviation(occurrence);
    case Approach::Exact: break;
  }
  return limit_;
}

SequenceSpec::SequenceSpec(std::vector<Strand> strands, std::map<Index, Rational> overrides)
    : strands_(std::move(strands)), overrides_(std::move(overrides)) {
  if (strands_.empty()) invalid("a sequence needs at least one strand");
  for (const auto& [index, value] : overrides_) {
    if (index == 0) invalid("override indices start at 1");
    if (value.sign() < 0) {
      invalid("override at index " + std::to_string(index) + " must be nonnegative");
    }
  }
}

std::size_t SequenceSpec::strand_of(Index n) const {
  return static_cast<std::size_t>((n - 1) % strands_.size());
}

std::uint64_t SequenceSpec::occurrence_of(Index n) const { return (n - 1) / strands_.size(); }

Index SequenceSpec::index_of(std::size_t strand, std::uint64_t occurrence) const {
  return occurrence * strands_.size() + strand + 1;
}

Rational SequenceSpec::entry(Index n) const {
  if (n == 0) invalid("entry index starts at 1");
  if (auto it = overrides_.find(n); it != overrides_.end()) return it->second;
  return strands_[strand_of(n)].value(occurrence_of(n));
}

SequenceSpec SequenceSpec::with_overrides(std::map<Index, Rational> overrides) const {
  return SequenceSpec(strands_, std::move(overrides));
}

Rational entry(const SequenceSpec& seq, Index n) { return seq.entry(n); }

std::set<Rational> essential_spectrum(const SequenceSpec& seq) {
  std::set<Rational> points;
  for (const auto& strand : seq.strands()) points.insert(strand.limit());
  return points;
}

bool spectrum_contains(const SequenceSpec& seq, const Rational& x) {
  if (x.sign() < 0) invalid("spectrum query point must be nonnegative");
  for (const auto& strand : seq.strands()) {
    if (strand.limit() == x) return true;
  }
  for (const auto& [index, value] : seq.overrides()) {
    if (value == x) return true;
  }
  for (std::size_t j = 0; j < seq.strand_count(); ++j) {
    const Strand& strand = seq.strands()[j];
    if (!strand.is_geometric()) continue;
    const bool right_side = strand.approach() == Approach::Above ? x > strand.limit()
                                                                 : x < strand.limit();
    if (!right_side) continue;
    const Rational gap = (x - strand.limit()).abs();
    // A r^k decreases strictly to 0, so the loop stops once it drops below gap.
    Rational deviation = strand.amplitude();
    for (std::uint64_t k = 0; deviation >= gap; ++k, deviation *= strand.ratio()) {
      if (deviation == gap && !seq.is_overridden(seq.index_of(j, k))) return true;
    }
  }
  return false;
}

BelowThreshold spectrum_elements_below(const SequenceSpec& seq, const Rational& threshold) {
  if (threshold.sign() < 0) invalid("threshold must be nonnegative");
  FiniteBelow finite;
  for (std::size_t j = 0; j < seq.strand_count(); ++j) {
    const Strand& strand = seq.strands()[j];
    const Rational& limit = strand.limit();
    switch (strand.approach()) {
      case Approach::Below:
        if (limit <= threshold) return InfiniteBelow{j};
        {
          const Rational margin = limit - threshold;
          Rational deviation = strand.amplitude();
          for (std::uint64_t k = 0; deviation > margin; ++k, deviation *= strand.ratio()) {
            if (!seq.is_overridden(seq.index_of(j, k))) finite.values.insert(limit - deviation);
          }
        }
        break;
      case Approach::Above:
      case Approach::Exact:
        if (limit < threshold) return InfiniteBelow{j};
        break;
    }
  }
  for (const auto& [index, value] : seq.overrides()) {
    if (value < threshold) finite.values.insert(value);
  }
  return finite;
}

}  // namespace attain
