#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kpref/embed.hpp"
#include "kpref/kpcalc.hpp"
#include "kpref/rsderiv.hpp"
#include "kpref/transforms.hpp"
#include "kpref/truth.hpp"

namespace kpref {

inline constexpr const char* kReportSchema = "kpref-report/1";

struct WalkOptions {
    std::size_t depth = 4;
    std::size_t node_budget = 20000;
};

struct WalkReport {
    Truth verdict = Truth::True;
    std::size_t visited = 0;
    std::vector<Violation> violations;
    bool refused = false;  // rank bound above Omega+1
};

// Truth audit along the derivation; branches sampled from the battery.
WalkReport verify_truth_walk(const DerivP& w, const Universe& u, const TermBattery& battery, const WalkOptions& opt);

// Rebuilds w with finite kid i replaced.
DerivP replace_kid(const DerivP& w, std::size_t i, const DerivP& kid);

using Mutation = std::function<DerivP(const DerivP&)>;

struct PipelineOptions {
    unsigned universe_rank = 4;
    std::uint64_t omega_fuel = 8;
    std::string battery = "std-v1";
    std::size_t wf_depth = 6;
    WalkOptions walk;
    Mutation sabotage;  // applied to the embedding before the well-formedness stage
};

struct StageRecord {
    std::string name;
    NodeInfo root;
    double wall_ms = 0;
    std::string note;
};

struct StageViolation {
    std::string stage;
    std::string path;
    std::string message;
};

struct PipelineReport {
    std::string proof;
    std::string subst;
    unsigned k = 0;
    unsigned m = 0;
    std::vector<StageRecord> stages;
    std::optional<OrdNotation> final_rank;
    std::optional<OrdNotation> final_length;
    Truth verdict = Truth::Unknown;
    std::size_t explored = 0;
    std::vector<StageViolation> violations;
    std::string failed_stage;  // empty when every stage passed
    DerivP final_derivation;

    bool ok() const { return failed_stage.empty(); }
    nlohmann::json to_json(bool timing = true) const;
};

nlohmann::json node_json(const NodeInfo& n);

PipelineReport reflect(const FinProofP& p, const std::string& subst, const PipelineOptions& opt,
                       const std::string& name = "");
PipelineReport reflect_text(const std::string& text, const std::string& subst, const PipelineOptions& opt,
                            const std::string& name = "");

// Negative controls: each must be rejected at `stage` with `message` in a violation.
struct Sabotage {
    std::string name;
    std::string text;
    std::string subst;
    Mutation mutate;
    std::string stage;
    std::string message;
};
std::vector<Sabotage> sabotages();

}  // namespace kpref
