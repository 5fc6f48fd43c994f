#include "qom/trace_io.hpp"

#include <charconv>
#include <cstdio>

#include <json.hpp>

namespace qom {

std::string format_float(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

void write_metadata_comments(std::ostream& os, const Metadata& meta) {
    for (const auto& [key, value] : meta) os << "# " << key << ": " << value << "\n";
}

namespace {

nlohmann::json metadata_json(const Metadata& meta) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, value] : meta) j[key] = value;
    return j;
}

} // namespace

void write_qgrid_csv(std::ostream& os, const QGrid& grid, const Metadata& meta) {
    write_metadata_comments(os, meta);
    const QGridSpec& s = grid.spec;
    os << "# re_range: [" << format_float(s.re_min) << ", " << format_float(s.re_max)
       << "] points " << s.re_points << "\n";
    os << "# im_range: [" << format_float(s.im_min) << ", " << format_float(s.im_max)
       << "] points " << s.im_points << "\n";
    os << "# layout: row j = Im index (ascending), column i = Re index (ascending)\n";
    for (Index j = 0; j < s.im_points; ++j) {
        for (Index i = 0; i < s.re_points; ++i) {
            if (i) os << ',';
            os << format_float(grid.values(j, i));
        }
        os << '\n';
    }
}

void write_qgrid_json(std::ostream& os, const QGrid& grid, const Metadata& meta) {
    nlohmann::json j;
    j["meta"] = metadata_json(meta);
    j["re_range"] = {grid.spec.re_min, grid.spec.re_max};
    j["im_range"] = {grid.spec.im_min, grid.spec.im_max};
    j["shape"] = {grid.spec.im_points, grid.spec.re_points};
    j["normalization"] = grid.normalization;
    j["window_warning"] = grid.window_warning;
    std::vector<double> flat;
    flat.reserve(grid.values.size());
    for (Index r = 0; r < grid.values.rows(); ++r)
        for (Index c = 0; c < grid.values.cols(); ++c) flat.push_back(grid.values(r, c));
    j["values"] = flat;
    os << j.dump(2) << '\n';
}

void write_trace_csv(std::ostream& os, const TransmissionTrace& trace, double kappa,
                     const Metadata& meta) {
    write_metadata_comments(os, meta);
    os << "detuning_over_kappa,transmission\n";
    for (std::size_t i = 0; i < trace.detuning.size(); ++i)
        os << format_float(trace.detuning[i] / kappa) << ','
           << format_float(trace.transmission[i]) << '\n';
}

void write_trace_json(std::ostream& os, const TransmissionTrace& trace, double kappa,
                      const Metadata& meta) {
    nlohmann::json j;
    j["meta"] = metadata_json(meta);
    std::vector<double> d(trace.detuning.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = trace.detuning[i] / kappa;
    j["detuning_over_kappa"] = d;
    j["transmission"] = trace.transmission;
    os << j.dump(2) << '\n';
}

void write_columns_csv(std::ostream& os, const std::vector<std::string>& names,
                       const std::vector<const std::vector<double>*>& columns,
                       const Metadata& meta) {
    if (names.size() != columns.size()) throw Error("column names/data mismatch");
    std::size_t rows = columns.empty() ? 0 : columns.front()->size();
    for (const auto* c : columns)
        if (c->size() != rows) throw Error("CSV columns must have equal length");
    write_metadata_comments(os, meta);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) os << ',';
        os << names[i];
    }
    os << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) os << ',';
            os << format_float((*columns[i])[r]);
        }
        os << '\n';
    }
}

std::string temperature_fit_json(const TemperatureFit& fit, const Metadata& meta) {
    nlohmann::json j;
    j["meta"] = metadata_json(meta);
    j["nbar"] = fit.nbar;
    j["residual_norm"] = fit.residual_norm;
    j["uncertainty"] = fit.uncertainty;
    j["model_evaluations"] = fit.model_evaluations;
    j["converged"] = fit.converged;
    j["boundary_pinned"] = fit.boundary_pinned;
    j["method"] = fit.method;
    return j.dump(2);
}

} // namespace qom
