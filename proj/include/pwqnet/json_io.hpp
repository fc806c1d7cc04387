#pragma once

#include <filesystem>
#include <json.hpp>

#include "pwqnet/lifting.hpp"
#include "pwqnet/net.hpp"
#include "pwqnet/pwq1d.hpp"
#include "pwqnet/verify1d.hpp"
#include "pwqnet/verifynd.hpp"

namespace pwqnet::io {

// ordered_json keeps the documented field order; numbers round-trip exactly.
using Json = nlohmann::ordered_json;

Json to_json(const Pwq1D& f);
Json to_json(const Pwa1D& h);
Json to_json(const ToleranceConfig& tol);
Json to_json(const CostSpec& cost);
Json to_json(const FeedForwardNet& net);
Json to_json(const PwqND& f);
Json to_json(const PwaND& h);
Json to_json(const VerificationReport& rep);
Json to_json(const LiftConditionsReport& rep);
Json to_json(const ValidationResult& res);
Json to_json(const QpSolution& sol);
Json to_json(const QpProblem& p);  // debugging aid
QpProblem qp_problem_from_json(const Json& j);

// Parsers raise std::invalid_argument with a JSON-path style location, e.g.
// "/layers/0/W: expected array".
Pwq1D pwq1d_from_json(const Json& j);
Pwa1D pwa1d_from_json(const Json& j);
ToleranceConfig tolerances_from_json(const Json& j);
CostSpec cost_from_json(const Json& j);
FeedForwardNet net_from_json(const Json& j);
PwqND pwqnd_from_json(const Json& j);
PwaND pwand_from_json(const Json& j);

Json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& j);

}  // namespace pwqnet::io
