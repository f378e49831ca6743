#include "fitsim/data/trimp.hpp"

#include <cmath>
#include <stdexcept>

namespace fitsim::data {

double trimp(double duration_min, double avg_hr, double rest_hr, double max_hr, Sex sex) {
    if (!(duration_min > 0.0)) throw std::domain_error("trimp: duration_min must be > 0");
    if (!(rest_hr < avg_hr)) throw std::domain_error("trimp: avg_hr must exceed rest_hr");
    if (!(avg_hr <= max_hr)) throw std::domain_error("trimp: avg_hr must not exceed max_hr");
    if (!(rest_hr > 0.0)) throw std::domain_error("trimp: rest_hr must be > 0");
    const double dhr = (avg_hr - rest_hr) / (max_hr - rest_hr);
    const double k = sex == Sex::Male ? 1.92 : 1.67;
    return duration_min * dhr * 0.64 * std::exp(k * dhr);
}

double trimp(const Session& session) {
    return trimp(session.duration_min, session.avg_hr, session.rest_hr, session.max_hr,
                 session.sex);
}

IntensitySeries sessions_to_trimp(const std::vector<Session>& sessions,
                                  const std::string& user_id) {
    IntensitySeries series;
    series.user_id = user_id;
    series.unit = IntensityUnit::Trimp;
    series.samples.reserve(sessions.size());
    for (const auto& s : sessions) {
        series.samples.push_back({s.date, trimp(s)});
    }
    series.validate();
    return series;
}

}  // namespace fitsim::data
