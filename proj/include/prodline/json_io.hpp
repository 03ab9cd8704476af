#pragma once

#include <json.hpp>

#include "prodline/limited.hpp"
#include "prodline/model.hpp"
#include "prodline/oracle.hpp"

namespace prodline {

using json = nlohmann::json;

json to_json(const Schedule& s);
Schedule schedule_from_json(const json& j);

json to_json(const VerificationReport& r);
json to_json(const MonotonicityReport& r);
json to_json(const MeanDistribution& g);
json to_json(const DualCertificate& c);

const char* regime_string(ScheduleRegime r);

}  // namespace prodline
