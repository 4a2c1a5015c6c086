#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bartree/rational.hpp"
#include "bartree/reverse_tree.hpp"

namespace bartree {

// Initial bar width I and per-depth shrink ratio r; valid for a profile when
// I > 0 and 0 <= r <= I / d_max.
struct BarParams {
  Rational I{1};
  Rational r{0};

  // I = 1, r = 1 / (d_max + 1).
  static BarParams defaults_for(std::size_t d_max);

  // Throws Error(InvalidRatio) when the bound does not hold for d_max.
  void validate(std::size_t d_max) const;
  bool valid_for(std::size_t d_max) const noexcept;

  friend bool operator==(const BarParams&, const BarParams&) = default;
};

enum class NettForm { Recursive, Product };

// All sequences are indexed by depth d = 0..d_max (size d_max + 1).

// w_0 = I, w_d = (I - (d-1) r) / P_{d-1} * w_{d-1}.
std::vector<Rational> widths(const DepthProfile& profile, const BarParams& params);

// A_0 = 0, A_d = d * (I - (d-1) r) / P_{d-1} * w_{d-1}.
std::vector<Rational> areas(const DepthProfile& profile, const BarParams& params);

// Area of bar d not covered by deeper bars. Entry 0 is undefined and held
// as 0. The product form multiplies the shrink factors from depth d back to
// the root; the recursive form subtracts the overlap (d-1) w_d from A_d.
std::vector<Rational> nett_areas(const DepthProfile& profile,
                                 const BarParams& params, NettForm form);

// Sum of nett areas over d = 1..d_max.
Rational total_area(const DepthProfile& profile, const BarParams& params);

struct BarTree {
  BarParams params;
  DepthProfile profile;
  std::vector<Rational> w;
  std::vector<Rational> A;
  std::vector<Rational> A_nett;
  Rational A_total;

  static BarTree build(const DepthProfile& profile, const BarParams& params);
};

// Stored variable set identifying one template version.
struct Fingerprint {
  std::size_t d_max = 0;
  Rational A_total{0};
  std::vector<std::size_t> P;
  std::vector<Rational> A;
  std::int64_t sigma_upper = 0;
  std::int64_t sigma_lower = 0;
  std::int64_t delta = 0;
  BarParams params;
  std::string captured_at;  // RFC 3339, UTC
  std::string roi_digest;   // hex SHA-256 of the normalized RoI text

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

Fingerprint fingerprint(const DepthProfile& profile, std::int64_t sigma_upper,
                        std::int64_t sigma_lower, const BarParams& params,
                        std::string_view roi_text, std::string captured_at);

// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

}  // namespace bartree
