#pragma once

#include <vector>

#include "fitsim/data/csv.hpp"
#include "fitsim/data/series.hpp"

namespace fitsim::data {

// Banister training impulse for one session:
//   dHRr  = (avg_hr - rest_hr) / (max_hr - rest_hr)
//   TRIMP = duration_min * dHRr * 0.64 * exp(k * dHRr),  k = 1.92 (male), 1.67 (female)
// Requires duration_min > 0 and rest_hr < avg_hr <= max_hr.
double trimp(double duration_min, double avg_hr, double rest_hr, double max_hr, Sex sex);

double trimp(const Session& session);

// One TRIMP value per session, as an intensity series in TRIMP units.
IntensitySeries sessions_to_trimp(const std::vector<Session>& sessions,
                                  const std::string& user_id);

}  // namespace fitsim::data
