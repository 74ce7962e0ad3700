#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "legalex/dates.hpp"
#include "legalex/entities.hpp"

namespace legalex {

/// Raw ingredients of the point-value formula. PSI = psychological incapacity,
/// PI = physical incapacity, MD = moral damage; _a amounts, _p percentages.
struct PointValueInputs {
    std::optional<double> psi_amount;
    std::optional<double> psi_percent;
    std::optional<double> pi_amount;
    std::optional<double> pi_percent;
    std::optional<double> md_amount;
};

struct PointValueRecord {
    std::string doc_id;
    std::optional<YearMonth> ruling_month;
    double pv = 0.0;  // sum of the present terms
    std::optional<double> psi_term;
    std::optional<double> pi_term;
    PointValueInputs inputs;
};

// The per-ruling point value:
//
//   pv = psi_amount / psi_percent + (pi_amount + md_amount) / pi_percent
//
// Each term is dropped (with a warning) when its percentage is absent or not
// positive; a missing amount inside the physical numerator counts as zero as
// long as the other one is present. Moral damage flows through the physical
// term only — with no physical percentage it contributes nothing. When no
// term survives there is no point value and nullopt comes back.
std::optional<PointValueRecord> point_value(const PointValueInputs& inputs,
                                            std::vector<std::string>* warnings = nullptr);

// Maps one document's extractions onto the formula inputs: psychological ->
// PSI, physical -> PI, moral damage -> MD. Errored and empty records are
// skipped; psychophysical records carry no slot in the formula and are
// ignored with a warning. All records must share one doc_id.
PointValueInputs inputs_from_extractions(const std::vector<Extraction>& doc_extractions,
                                         std::vector<std::string>* warnings = nullptr);

// Convenience composition of the two above; fills doc_id from the records.
std::optional<PointValueRecord> point_value(const std::vector<Extraction>& doc_extractions,
                                            std::vector<std::string>* warnings = nullptr);

struct MonthlyStat {
    double mean = 0.0;
    double median = 0.0;
    std::size_t n = 0;
};

// Groups records by ruling month; months without records simply don't appear.
// Throws std::invalid_argument on a record without a ruling month.
std::map<YearMonth, MonthlyStat> monthly_point_value(
    const std::vector<PointValueRecord>& records);

/// Consumer price index by month; values positive, months unique and ordered.
struct CpiSeries {
    std::map<YearMonth, double> values;
};

struct CpiRow {
    YearMonth month;
    std::optional<double> pv_mean;
    std::optional<double> cpi;
    std::optional<double> pv_indexed;  // only where both series overlap
};

struct CpiComparison {
    std::vector<CpiRow> rows;        // union of months, chronological
    std::optional<double> pearson;   // over the overlap; absent when < 2 months
                                     // overlap or either series is constant
};

// Joins the monthly point values against the CPI. pv_indexed is pv_mean/cpi
// rescaled so the first overlapping month reads 1.0; the Pearson correlation
// uses the raw (pv_mean, cpi) pairs of the overlap.
CpiComparison cpi_compare(const std::map<YearMonth, MonthlyStat>& pv_monthly,
                          const CpiSeries& cpi);

struct Histogram {
    std::vector<double> bin_edges;
    std::vector<std::size_t> counts;
    std::vector<double> fractions;
};

// Bins are half-open [a, b) except the last, which closes at the top edge so
// a 100% disability lands inside. Values must lie in (0, 100] and the edges
// must ascend and cover that interval; empty input is an error.
Histogram disability_histogram(const std::vector<double>& percentages,
                               const std::vector<double>& bin_edges);

// Tail shares on the raw values, strict comparisons on both sides.
double fraction_below(const std::vector<double>& values, double threshold);
double fraction_above(const std::vector<double>& values, double threshold);

}  // namespace legalex
