#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "pellpad/pipeline.hpp"
#include "pellpad/search.hpp"

namespace pellpad {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

class CertificateFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integers and reals are written as decimal strings throughout.
json to_json(const BigReal& x);
json to_json(const ReductionOutcome& o);
json to_json(const BoundCertificate& c);
json to_json(const SolutionRecord& r);
json to_json(const SolutionMap& m);
json to_json(const TheoremReport& r);
json to_json(const AbsoluteBounds& ab);
json to_json(const CycleReport& c);
json to_json(const FinalReduction& f);
json to_json(const PellFundamental& f);
json to_json(const CFExpansion& cf, size_t max_terms);

json certificate_json(const Certification& c, const PrecisionPolicy& pol);

// What a stored certificate is re-checked against.
struct StoredCertificate {
  EqKind eq;
  bool sampled = true;
  std::string convention;
  SearchBox box;
  std::vector<UnitValue> candidates;
  SolutionMap solutions;
  json theorem;  // report as written
  bool ok = false;
};

StoredCertificate read_certificate(const json& j);
SolutionMap solutions_from_json(const json& j, const EqKind& eq);

// CSV emitters.
void write_table_csv(std::ostream& os, const TableSearchResult& t);
void write_stage_csv(std::ostream& os, const FinalReduction& f);
void write_solutions_csv(std::ostream& os, const SolutionMap& m);

}  // namespace pellpad
