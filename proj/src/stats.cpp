#include "legalex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace legalex {

namespace {

void warn(std::vector<std::string>* warnings, std::string message) {
    if (warnings) warnings->push_back(std::move(message));
}

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

std::optional<PointValueRecord> point_value(const PointValueInputs& inputs,
                                            std::vector<std::string>* warnings) {
    PointValueRecord record;
    record.inputs = inputs;

    if (inputs.psi_amount) {
        if (inputs.psi_percent && *inputs.psi_percent > 0.0)
            record.psi_term = *inputs.psi_amount / *inputs.psi_percent;
        else
            warn(warnings,
                 "psychological amount present without a positive percentage; term dropped");
    }
    if (inputs.pi_amount || inputs.md_amount) {
        if (inputs.pi_percent && *inputs.pi_percent > 0.0)
            record.pi_term = (inputs.pi_amount.value_or(0.0) + inputs.md_amount.value_or(0.0)) /
                             *inputs.pi_percent;
        else
            warn(warnings,
                 "physical/moral amount present without a positive physical percentage; "
                 "term dropped");
    }

    if (!record.psi_term && !record.pi_term) return std::nullopt;
    record.pv = record.psi_term.value_or(0.0) + record.pi_term.value_or(0.0);
    return record;
}

PointValueInputs inputs_from_extractions(const std::vector<Extraction>& doc_extractions,
                                         std::vector<std::string>* warnings) {
    PointValueInputs inputs;
    for (const Extraction& extraction : doc_extractions) {
        if (!extraction.answered()) continue;
        switch (extraction.kind) {
            case EntityKind::PhysicalDisability:
                inputs.pi_amount = extraction.amount;
                inputs.pi_percent = extraction.percentage;
                break;
            case EntityKind::PsychologicalDisability:
                inputs.psi_amount = extraction.amount;
                inputs.psi_percent = extraction.percentage;
                break;
            case EntityKind::MoralDamage:
                inputs.md_amount = extraction.amount;
                break;
            case EntityKind::PsychophysicalDisability:
                // The formula has no combined-incapacity slot; splitting the
                // value between the two terms would be invention.
                warn(warnings, "psychophysical extraction for " + extraction.doc_id +
                                   " has no place in the point-value formula; ignored");
                break;
        }
    }
    return inputs;
}

std::optional<PointValueRecord> point_value(const std::vector<Extraction>& doc_extractions,
                                            std::vector<std::string>* warnings) {
    for (std::size_t i = 1; i < doc_extractions.size(); ++i)
        if (doc_extractions[i].doc_id != doc_extractions[0].doc_id)
            throw std::invalid_argument("point_value expects extractions of one document");
    auto record = point_value(inputs_from_extractions(doc_extractions, warnings), warnings);
    if (record && !doc_extractions.empty()) record->doc_id = doc_extractions[0].doc_id;
    return record;
}

std::map<YearMonth, MonthlyStat> monthly_point_value(
    const std::vector<PointValueRecord>& records) {
    std::map<YearMonth, std::vector<double>> by_month;
    for (const PointValueRecord& record : records) {
        if (!record.ruling_month)
            throw std::invalid_argument("monthly_point_value: record for " + record.doc_id +
                                        " has no ruling month");
        by_month[*record.ruling_month].push_back(record.pv);
    }
    std::map<YearMonth, MonthlyStat> out;
    for (const auto& [month, pvs] : by_month)
        out[month] = MonthlyStat{mean_of(pvs), median_of(pvs), pvs.size()};
    return out;
}

CpiComparison cpi_compare(const std::map<YearMonth, MonthlyStat>& pv_monthly,
                          const CpiSeries& cpi) {
    CpiComparison out;

    std::map<YearMonth, CpiRow> rows;
    for (const auto& [month, stat] : pv_monthly) {
        rows[month].month = month;
        rows[month].pv_mean = stat.mean;
    }
    for (const auto& [month, index] : cpi.values) {
        if (index <= 0.0) throw std::invalid_argument("CPI index values must be positive");
        rows[month].month = month;
        rows[month].cpi = index;
    }

    std::optional<double> first_ratio;
    std::vector<double> xs, ys;  // overlap pairs for the correlation
    for (auto& [month, row] : rows) {
        if (!row.pv_mean || !row.cpi) continue;
        const double ratio = *row.pv_mean / *row.cpi;
        if (!first_ratio) first_ratio = ratio;
        row.pv_indexed = ratio / *first_ratio;
        xs.push_back(*row.pv_mean);
        ys.push_back(*row.cpi);
    }

    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        const double mx = mean_of(xs), my = mean_of(ys);
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
            syy += (ys[i] - my) * (ys[i] - my);
        }
        (void)n;
        if (sxx > 0.0 && syy > 0.0) out.pearson = sxy / std::sqrt(sxx * syy);
    }

    out.rows.reserve(rows.size());
    for (auto& [month, row] : rows) out.rows.push_back(std::move(row));
    return out;
}

Histogram disability_histogram(const std::vector<double>& percentages,
                               const std::vector<double>& bin_edges) {
    if (percentages.empty())
        throw std::invalid_argument("disability_histogram requires at least one value");
    if (bin_edges.size() < 2)
        throw std::invalid_argument("disability_histogram requires at least two bin edges");
    for (std::size_t i = 1; i < bin_edges.size(); ++i)
        if (bin_edges[i] <= bin_edges[i - 1])
            throw std::invalid_argument("bin edges must be strictly ascending");
    if (bin_edges.front() > 0.0 || bin_edges.back() < 100.0)
        throw std::invalid_argument("bin edges must cover (0, 100]");
    for (double value : percentages)
        if (value <= 0.0 || value > 100.0)
            throw std::invalid_argument("disability percentages must lie in (0, 100]");

    Histogram hist;
    hist.bin_edges = bin_edges;
    hist.counts.assign(bin_edges.size() - 1, 0);
    for (double value : percentages) {
        auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), value);
        std::size_t bin = static_cast<std::size_t>(it - bin_edges.begin()) - 1;
        if (bin == hist.counts.size()) --bin;  // top edge closes the last bin
        ++hist.counts[bin];
    }
    hist.fractions.reserve(hist.counts.size());
    for (std::size_t count : hist.counts)
        hist.fractions.push_back(static_cast<double>(count) /
                                 static_cast<double>(percentages.size()));
    return hist;
}

double fraction_below(const std::vector<double>& values, double threshold) {
    if (values.empty()) throw std::invalid_argument("fraction_below requires values");
    const auto n = std::count_if(values.begin(), values.end(),
                                 [&](double v) { return v < threshold; });
    return static_cast<double>(n) / static_cast<double>(values.size());
}

double fraction_above(const std::vector<double>& values, double threshold) {
    if (values.empty()) throw std::invalid_argument("fraction_above requires values");
    const auto n = std::count_if(values.begin(), values.end(),
                                 [&](double v) { return v > threshold; });
    return static_cast<double>(n) / static_cast<double>(values.size());
}

}  // namespace legalex
