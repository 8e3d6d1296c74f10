/*
 * Copyright 2026 The ptes Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ptes/market.h"

#include <algorithm>
#include <cmath>

#include "ptes/error.h"
#include "ptes/rng.h"

namespace ptes::market {
namespace {

constexpr double kSnap = 1e-12;

double Scale(double x, int digits) {
  if (!std::isfinite(x) || x < 0) {
    throw Error(ErrorCode::kDomainError, "quantity must be finite and >= 0");
  }
  if (digits < 0 || digits > 18) {
    throw Error(ErrorCode::kDomainError, "precision must be in [0, 18]");
  }
  return x * std::pow(10.0, digits);
}

bool NearInteger(double scaled, double r) {
  return std::fabs(r - scaled) <= kSnap * std::max(1.0, scaled);
}

BigNat FromWhole(double whole) {
  BigNat out;
  mpz_set_d(out.get_mpz_t(), whole);
  return out;
}

void CheckIndex(std::size_t index, std::size_t n) {
  if (index < 1 || index > n) {
    throw Error(ErrorCode::kIndexError, "grid index " + std::to_string(index) +
                                            " outside 1.." + std::to_string(n));
  }
}

int Sign(const BigNat& x) { return sgn(x); }

}  // namespace

BigNat Quantize(double x, int digits) {
  const double scaled = Scale(x, digits);
  const double r = std::nearbyint(scaled);
  return FromWhole(NearInteger(scaled, r) ? r : std::floor(scaled));
}

BigNat CeilUnits(double x, int digits) {
  const double scaled = Scale(x, digits);
  const double r = std::nearbyint(scaled);
  return FromWhole(NearInteger(scaled, r) ? r : std::ceil(scaled));
}

PriceGrid::PriceGrid(double lambda_min, double lambda_max, double tau,
                     int sigma, int sigma_lambda)
    : lambda_min_(lambda_min),
      lambda_max_(lambda_max),
      tau_(tau),
      sigma_(sigma),
      sigma_lambda_(sigma_lambda) {
  if (!(tau > 0) || !(lambda_min >= 0) || !(lambda_max >= lambda_min) ||
      !std::isfinite(lambda_max)) {
    throw Error(ErrorCode::kDomainError,
                "grid needs tau > 0 and 0 <= lambda_min <= lambda_max");
  }
  if (sigma < 0 || sigma > 18 || sigma_lambda < 0 || sigma_lambda > 18) {
    throw Error(ErrorCode::kDomainError, "precision must be in [0, 18]");
  }
  n_points_ = static_cast<std::size_t>(
                  std::floor((lambda_max - lambda_min) / tau + 1e-9)) +
              1;
}

PriceGrid PriceGrid::WithPoints(std::size_t n_points, double lambda_min,
                                double tau, int sigma, int sigma_lambda) {
  if (n_points == 0) {
    throw Error(ErrorCode::kDomainError, "grid needs at least one point");
  }
  PriceGrid grid(lambda_min, lambda_min + (n_points - 1) * tau, tau, sigma,
                 sigma_lambda);
  grid.n_points_ = n_points;
  return grid;
}

double PriceGrid::Price(std::size_t index) const {
  CheckIndex(index, n_points_);
  return lambda_min_ + static_cast<double>(index - 1) * tau_;
}

BigNat PriceGrid::PriceUnits(std::size_t index) const {
  return Quantize(Price(index), sigma_lambda_);
}

std::string_view CurveKindName(CurveKind kind) {
  return kind == CurveKind::kSupply ? "supply" : "demand";
}

CurveKind ParseCurveKind(std::string_view name) {
  if (name == "supply") return CurveKind::kSupply;
  if (name == "demand") return CurveKind::kDemand;
  throw Error(ErrorCode::kConfigError,
              "unknown curve kind '" + std::string(name) + "'");
}

bool SatisfiesInvariants(const SampledCurve& curve, std::size_t n_points,
                         const BigNat& delta_units) {
  if (curve.values.size() != n_points) return false;
  for (std::size_t l = 0; l < n_points; ++l) {
    const BigNat& v = curve.values[l];
    if (v < 0 || v >= delta_units) return false;
    if (l == 0) continue;
    const BigNat& prev = curve.values[l - 1];
    if (curve.kind == CurveKind::kSupply ? v < prev : v > prev) return false;
  }
  return true;
}

std::vector<SampledCurve> GenPopulation(const PopulationParams& params,
                                        const PriceGrid& grid) {
  if (params.power_lo < 0 || params.power_hi < params.power_lo ||
      params.price_hi < params.price_lo ||
      params.active_probability < 0 || params.active_probability > 1) {
    throw Error(ErrorCode::kDomainError, "inverted population range");
  }
  if (params.power_hi >= params.delta) {
    throw Error(ErrorCode::kDomainError,
                "rated power must stay strictly below delta");
  }
  const std::size_t n = grid.n_points();
  std::vector<SampledCurve> out;
  out.reserve(params.n_agents);
  for (std::size_t k = 0; k < params.n_agents; ++k) {
    const std::size_t id = params.first_id + k;
    Rng rng(DeriveSeed(params.seed,
                       {static_cast<std::uint64_t>(params.kind), id}));
    // Fixed draw order keeps each agent's stream stable across parameters.
    const bool active = rng.Bernoulli(params.active_probability);
    const double price = rng.Uniform(params.price_lo, params.price_hi);
    const BigNat power =
        Quantize(rng.Uniform(params.power_lo, params.power_hi), grid.sigma());

    SampledCurve curve{params.kind, std::vector<BigNat>(n),
                       params.id_prefix + std::to_string(id)};
    if (active) {
      for (std::size_t l = 1; l <= n; ++l) {
        const double p = grid.Price(l);
        const bool on = params.kind == CurveKind::kDemand ? p <= price
                                                          : p >= price;
        if (on) curve.values[l - 1] = power;
      }
    }
    out.push_back(std::move(curve));
  }
  return out;
}

SampledCurve Aggregate(std::span<const SampledCurve> curves) {
  if (curves.empty()) {
    throw Error(ErrorCode::kEmptyAggregation, "no curves to aggregate");
  }
  SampledCurve sum = ZeroCurve(curves.front().kind, curves.front().values.size(),
                               "aggregate");
  for (const SampledCurve& c : curves) {
    if (c.kind != sum.kind) {
      throw Error(ErrorCode::kKindMismatch, "supply and demand curves mixed");
    }
    if (c.values.size() != sum.values.size()) {
      throw Error(ErrorCode::kGridMismatch, "curve lengths differ");
    }
    for (std::size_t l = 0; l < c.values.size(); ++l) sum.values[l] += c.values[l];
  }
  return sum;
}

SampledCurve ZeroCurve(CurveKind kind, std::size_t n_points,
                       std::string owner_id) {
  return SampledCurve{kind, std::vector<BigNat>(n_points), std::move(owner_id)};
}

ClearingPoint ClearTwoSided(const SampledCurve& supply,
                            const SampledCurve& demand, const PriceGrid& grid) {
  const std::size_t n = grid.n_points();
  if (supply.values.size() != n || demand.values.size() != n) {
    throw Error(ErrorCode::kGridMismatch, "curve length differs from grid");
  }
  std::vector<BigNat> gap(n);
  for (std::size_t l = 0; l < n; ++l) {
    gap[l] = supply.values[l] - demand.values[l];
    if (gap[l] == 0) return {l + 1, grid.Price(l + 1), true, false};
  }
  std::vector<bool> candidate(n, false);
  bool any = false;
  for (std::size_t l = 0; l + 1 < n; ++l) {
    if (Sign(gap[l]) != Sign(gap[l + 1])) {
      candidate[l] = candidate[l + 1] = any = true;
    }
  }
  std::size_t best = n;
  BigNat best_abs;
  for (std::size_t l = 0; l < n; ++l) {
    if (any && !candidate[l]) continue;
    BigNat a = abs(gap[l]);
    if (best == n || a < best_abs) {
      best = l;
      best_abs = a;
    }
  }
  return {best + 1, grid.Price(best + 1), false, false};
}

ClearingPoint ClearCapacity(const SampledCurve& demand, double capacity,
                            std::size_t base_index, const PriceGrid& grid) {
  if (!(capacity > 0)) {
    throw Error(ErrorCode::kDomainError, "capacity must be positive");
  }
  const std::size_t n = grid.n_points();
  if (demand.values.size() != n) {
    throw Error(ErrorCode::kGridMismatch, "curve length differs from grid");
  }
  CheckIndex(base_index, n);
  const BigNat cap = Quantize(capacity, grid.sigma());
  if (demand.values[base_index - 1] <= cap) {
    return {base_index, grid.Price(base_index), false, false};
  }
  for (std::size_t l = 1; l <= n; ++l) {
    if (demand.values[l - 1] <= cap) return {l, grid.Price(l), false, false};
  }
  return {n, grid.Price(n), false, true};
}

}  // namespace ptes::market
