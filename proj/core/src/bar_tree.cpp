#include "bartree/bar_tree.hpp"

#include <chrono>
#include <ctime>

#include "bartree/digest.hpp"
#include "bartree/error.hpp"
#include "bartree/roi_locator.hpp"

namespace bartree {
namespace {

void check_profile(const DepthProfile& profile, const BarParams& params) {
  if (profile.P.size() != profile.d_max) {
    throw Error(ErrorCode::InvalidInput, "profile has P.size() != d_max");
  }
  for (std::size_t p : profile.P) {
    if (p == 0) throw Error(ErrorCode::InvalidInput, "profile has P_d = 0");
  }
  params.validate(profile.d_max);
}

// (I - k r) / P_k: the shrink applied when going from depth k to k + 1.
Rational shrink(const DepthProfile& profile, const BarParams& params,
                std::size_t k) {
  return (params.I - Rational(k) * params.r) / Rational(profile.P[k]);
}

}  // namespace

BarParams BarParams::defaults_for(std::size_t d_max) {
  return {Rational(1), Rational(1, d_max + 1)};
}

bool BarParams::valid_for(std::size_t d_max) const noexcept {
  if (I <= 0 || r < 0) return false;
  return d_max == 0 || r * Rational(d_max) <= I;
}

void BarParams::validate(std::size_t d_max) const {
  if (I <= 0) {
    throw Error(ErrorCode::InvalidRatio, "initial width I must be positive");
  }
  if (!valid_for(d_max)) {
    throw Error(ErrorCode::InvalidRatio,
                "ratio r=" + to_fraction_string(r) + " violates 0 <= r <= I/" +
                    std::to_string(d_max));
  }
}

std::vector<Rational> widths(const DepthProfile& profile, const BarParams& params) {
  check_profile(profile, params);
  std::vector<Rational> w(profile.d_max + 1);
  w[0] = params.I;
  for (std::size_t d = 1; d <= profile.d_max; ++d) {
    w[d] = shrink(profile, params, d - 1) * w[d - 1];
  }
  return w;
}

std::vector<Rational> areas(const DepthProfile& profile, const BarParams& params) {
  const std::vector<Rational> w = widths(profile, params);
  std::vector<Rational> a(w.size());
  a[0] = 0;
  for (std::size_t d = 1; d < w.size(); ++d) {
    a[d] = Rational(d) * shrink(profile, params, d - 1) * w[d - 1];
  }
  return a;
}

std::vector<Rational> nett_areas(const DepthProfile& profile,
                                 const BarParams& params, NettForm form) {
  std::vector<Rational> nett(profile.d_max + 1);
  if (form == NettForm::Recursive) {
    const std::vector<Rational> w = widths(profile, params);
    const std::vector<Rational> a = areas(profile, params);
    for (std::size_t d = 1; d <= profile.d_max; ++d) {
      nett[d] = a[d] - Rational(d - 1) * w[d];
    }
    return nett;
  }

  check_profile(profile, params);
  for (std::size_t d = 1; d <= profile.d_max; ++d) {
    Rational product(1);
    for (std::size_t n = 0; n < d; ++n) {
      product *= shrink(profile, params, d - 1 - n);
    }
    nett[d] = product * params.I;  // w_0 = I
  }
  return nett;
}

Rational total_area(const DepthProfile& profile, const BarParams& params) {
  const std::vector<Rational> nett =
      nett_areas(profile, params, NettForm::Product);
  Rational total(0);
  for (std::size_t d = 1; d < nett.size(); ++d) total += nett[d];
  return total;
}

BarTree BarTree::build(const DepthProfile& profile, const BarParams& params) {
  BarTree tree;
  tree.params = params;
  tree.profile = profile;
  tree.w = widths(profile, params);
  tree.A = areas(profile, params);
  tree.A_nett = nett_areas(profile, params, NettForm::Recursive);
  tree.A_total = 0;
  for (std::size_t d = 1; d < tree.A_nett.size(); ++d) tree.A_total += tree.A_nett[d];
  return tree;
}

Fingerprint fingerprint(const DepthProfile& profile, std::int64_t sigma_upper,
                        std::int64_t sigma_lower, const BarParams& params,
                        std::string_view roi_text, std::string captured_at) {
  Fingerprint fp;
  fp.d_max = profile.d_max;
  fp.P = profile.P;
  fp.A = areas(profile, params);
  fp.A_total = total_area(profile, params);
  fp.sigma_upper = sigma_upper;
  fp.sigma_lower = sigma_lower;
  fp.delta = sigma_upper - sigma_lower;
  fp.params = params;
  fp.captured_at = std::move(captured_at);
  fp.roi_digest = sha256_hex(normalize_text(roi_text));
  return fp;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace bartree
