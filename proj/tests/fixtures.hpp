#pragma once

#include "svcache/content_model.hpp"
#include "svcache/geometry.hpp"
#include "svcache/policy.hpp"

namespace fixtures {

// Default parameter set shared by the tests (same values as the default
// configuration).
inline svcache::NetworkGeometry geometry() {
  return {svcache::TierGeometry::bounded(0.01, 20.0, 4.0),
          svcache::TierGeometry::bounded(0.001, 60.0, 4.0),
          svcache::TierGeometry::unbounded(1e-5, 4.0)};
}

inline svcache::ContentLibrary library() { return {20, 2, 25e6, 1.0, 5.0}; }

inline svcache::RadioConfig radio(double theta_db = 5.0, double backhaul = 100e6) {
  return svcache::RadioConfig::from_db(theta_db, 1e9, 1e9, 5e8, backhaul);
}

inline svcache::CacheBudgets budgets() { return {200e6, 500e6}; }

}  // namespace fixtures
