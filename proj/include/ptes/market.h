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

// Supply/demand curves on a discrete price grid, their plaintext aggregation,
// and the two clearing rules (two-sided intersection, feeder capacity).
// Quantities are carried as integers scaled by 10^sigma.

#ifndef PTES_MARKET_H_
#define PTES_MARKET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptes/numtheory.h"

namespace ptes::market {

// floor(x * 10^digits) for x >= 0. Products within a few ulps below an
// integer snap up to it, so 0.29 at two digits yields 29 rather than 28.
// Throws kDomainError for negative or non-finite x.
BigNat Quantize(double x, int digits);

// Smallest integer D with D >= x * 10^digits (same snapping), so that
// "value < x" on quantities becomes "units < D" on quantized integers.
BigNat CeilUnits(double x, int digits);

// Grid point l (1-based) sits at lambda_min + (l - 1) * tau, so both ends of
// [lambda_min, lambda_max] are on the grid.
class PriceGrid {
 public:
  PriceGrid() : PriceGrid(0.0, 1.0, 0.01) {}
  // Throws kDomainError unless tau > 0, lambda_max >= lambda_min, sigma and
  // sigma_lambda in [0, 18].
  PriceGrid(double lambda_min, double lambda_max, double tau, int sigma = 2,
            int sigma_lambda = 2);
  static PriceGrid WithPoints(std::size_t n_points, double lambda_min,
                              double tau, int sigma = 2, int sigma_lambda = 2);

  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }
  double tau() const { return tau_; }
  int sigma() const { return sigma_; }
  int sigma_lambda() const { return sigma_lambda_; }
  std::size_t n_points() const { return n_points_; }

  // Throws kIndexError outside 1..n_points.
  double Price(std::size_t index) const;
  // 10^sigma_lambda * Price(index) as an integer.
  BigNat PriceUnits(std::size_t index) const;

  friend bool operator==(const PriceGrid&, const PriceGrid&) = default;

 private:
  double lambda_min_, lambda_max_, tau_;
  int sigma_, sigma_lambda_;
  std::size_t n_points_;
};

enum class CurveKind { kSupply, kDemand };

std::string_view CurveKindName(CurveKind kind);
// Throws kConfigError for anything but "supply" / "demand".
CurveKind ParseCurveKind(std::string_view name);

struct SampledCurve {
  CurveKind kind = CurveKind::kDemand;
  std::vector<BigNat> values;  // one per grid point, scaled by 10^sigma
  std::string owner_id;

  friend bool operator==(const SampledCurve&, const SampledCurve&) = default;
};

// Length, per-value bound (value < delta_units) and monotone direction.
bool SatisfiesInvariants(const SampledCurve& curve, std::size_t n_points,
                         const BigNat& delta_units);

struct PopulationParams {
  CurveKind kind = CurveKind::kDemand;
  std::size_t n_agents = 100;
  double delta = 6.0;  // strict bound on any single quantity
  // Bid (demand) or offer (supply) prices, uniform.
  double price_lo = 0.0;
  double price_hi = 1.0;
  // Rated power (demand) or capacity (supply), uniform.
  double power_lo = 2.5;
  double power_hi = 5.0;
  // Agents that sit out the cycle report an all-zero curve.
  double active_probability = 1.0;
  std::uint64_t seed = 1;
  std::string id_prefix = "agent-";
  std::size_t first_id = 1;
};

// Step curves: a demand agent draws its rated power below its bid price and
// nothing above; a supplier offers its capacity at or above its offer price.
// Each agent uses its own seed stream, so agent i's curve does not depend on
// n_agents. Throws kDomainError if power_hi >= delta or a range is inverted.
std::vector<SampledCurve> GenPopulation(const PopulationParams& params,
                                        const PriceGrid& grid);

// Pointwise sum. Throws kEmptyAggregation on an empty list, kKindMismatch for
// mixed kinds, kGridMismatch for differing lengths.
SampledCurve Aggregate(std::span<const SampledCurve> curves);

SampledCurve ZeroCurve(CurveKind kind, std::size_t n_points,
                       std::string owner_id = "");

struct ClearingPoint {
  std::size_t index = 1;
  double lambda_star = 0.0;
  bool exact = false;                // supply met demand exactly at index
  bool capacity_infeasible = false;  // demand above capacity everywhere
};

// Smallest index of exact equality if any. Otherwise the smallest |gap|
// among indices next to a sign change of supply - demand (all indices if
// the sign never changes), ties going to the lower price.
ClearingPoint ClearTwoSided(const SampledCurve& supply,
                            const SampledCurve& demand, const PriceGrid& grid);

// Base price when demand there fits under capacity, else the first index
// whose demand does; lambda_max with capacity_infeasible set when none does.
// capacity is in quantity units and must be positive (kDomainError).
ClearingPoint ClearCapacity(const SampledCurve& demand, double capacity,
                            std::size_t base_index, const PriceGrid& grid);

}  // namespace ptes::market

#endif  // PTES_MARKET_H_
