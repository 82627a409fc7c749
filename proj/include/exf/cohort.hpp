#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "exf/rng.hpp"

namespace exf::cohort {

using json = nlohmann::ordered_json;

// Failure windows after the end of extubation, in minutes.
constexpr std::int64_t kReintubationWindow = 48 * 60;
constexpr std::int64_t kMortalityWindow = 48 * 60;
constexpr std::int64_t kSupportWindow = 6 * 60;
// Observation window preceding extubation.
constexpr std::int64_t kObservationWindow = 360;
// Ventilation-duration inclusion range (endpoints kept).
constexpr std::int64_t kMinVentDuration = 24 * 60;
constexpr std::int64_t kMaxVentDuration = 30 * 24 * 60;

enum class SupportKind { Niv, O2Flow, Cpap, Bipap };

const char* to_string(SupportKind k);
SupportKind support_kind_from_string(const std::string& s);

struct SupportEvent {
    std::int64_t time_min = 0;
    SupportKind kind = SupportKind::Niv;
};

struct VentilationTimeline {
    std::string patient_id;
    std::int64_t ventilation_start = 0;
    std::int64_t extubation_end = 0;
    std::vector<std::int64_t> reintubation_starts;  // ascending
    std::optional<std::int64_t> death_time;
    std::vector<SupportEvent> support_events;
    int admission_index = 0;

    void validate() const;
    json to_json() const;
    static VentilationTimeline from_json(const nlohmann::json& j);
};

enum class Gender { Male, Female };
enum class Ethnicity { Asian, Black, Hispanic, White, Other };

const char* to_string(Gender g);
const char* to_string(Ethnicity e);
Gender gender_from_string(const std::string& s);
Ethnicity ethnicity_from_string(const std::string& s);

struct StaticProfile {
    std::string patient_id;
    double age = 0.0;
    Gender gender = Gender::Male;
    Ethnicity ethnicity = Ethnicity::Other;
    std::optional<double> weight_kg;
    std::optional<double> height_cm;
    std::set<std::string> comorbidities;
    bool palliative_care = false;
    bool head_neck_surgery = false;

    json to_json() const;
    static StaticProfile from_json(const nlohmann::json& j);
};

// One timestamped observation of one dynamic feature; time is relative minutes
// within the 360-minute pre-extubation window.
struct EventRecord {
    std::string patient_id;
    std::string feature;
    std::int64_t time_min = 0;
    double value = 0.0;

    json to_json() const;
    static EventRecord from_json(const nlohmann::json& j);
};

// Charlson comorbidity weights plus APACHE-style age points.
const std::map<std::string, int>& charlson_weights();
int charlson_age_points(double age);
int charlson_score(const std::set<std::string>& conditions, double age);

// 1 = failure (reintubation or death within 48 h, or ventilatory support
// within 6 h of extubation end), 0 = success.
int annotate_outcome(const VentilationTimeline& t);

// Returns the kept patient ids, in input timeline order. Every timeline must
// have a matching profile.
std::vector<std::string> apply_inclusion_exclusion(const std::vector<VentilationTimeline>& timelines,
                                                   const std::vector<StaticProfile>& profiles);

struct FeatureSpec {
    std::string id;
    double frequency = 1.0;  // mean observations per patient per window
    double range_lo = 0.0;
    double range_hi = 1.0;
    double signal = 0.0;  // value offset added for failure-class patients
    int feature_set = 1;  // incremental membership: 1, 2 or 3
    std::string kind = "numeric";  // numeric | ras | gcs_eye | gcs_motor
    std::optional<std::pair<double, double>> bounds;  // provided outlier bounds
};

struct GeneratorConfig {
    std::size_t n_patients = 0;
    double failure_rate = 0.33;
    double noise_scale = 1.0;
    std::uint64_t seed = 0;
    std::vector<FeatureSpec> features;

    void validate() const;
    json to_json() const;
    static GeneratorConfig from_json(const nlohmann::json& j);
};

struct Cohort {
    std::vector<EventRecord> events;
    std::vector<StaticProfile> profiles;
    std::vector<VentilationTimeline> timelines;
};

// Synthetic stand-in cohort with a plantable class signal; bit-reproducible
// from the seed.
Cohort generate_cohort(const GeneratorConfig& config);

// Newline-delimited JSON round-trips for the three record streams.
std::string to_ndjson(const std::vector<EventRecord>& v);
std::string to_ndjson(const std::vector<StaticProfile>& v);
std::string to_ndjson(const std::vector<VentilationTimeline>& v);
std::vector<EventRecord> events_from_ndjson(const std::string& text);
std::vector<StaticProfile> profiles_from_ndjson(const std::string& text);
std::vector<VentilationTimeline> timelines_from_ndjson(const std::string& text);

}  // namespace exf::cohort
