#ifndef QOM_TRACE_IO_HPP
#define QOM_TRACE_IO_HPP

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "qom/driven_cavity.hpp"
#include "qom/phase_space.hpp"

namespace qom {

/// Locale-independent float formatting: 17 significant digits, scientific.
std::string format_float(double value);

/// Ordered key/value metadata written as leading '#' comment lines (CSV) or a
/// "meta" object (JSON).
using Metadata = std::map<std::string, std::string>;

void write_metadata_comments(std::ostream& os, const Metadata& meta);

/// Q grid as CSV: metadata comments, a header naming the ranges and shape,
/// then im_points rows of re_points values (row-major, Im ascending).
void write_qgrid_csv(std::ostream& os, const QGrid& grid, const Metadata& meta);
/// Q grid as JSON: metadata plus flattened row-major values.
void write_qgrid_json(std::ostream& os, const QGrid& grid, const Metadata& meta);

/// Transmission trace as CSV with header (detuning_over_kappa, transmission).
void write_trace_csv(std::ostream& os, const TransmissionTrace& trace, double kappa,
                     const Metadata& meta);
void write_trace_json(std::ostream& os, const TransmissionTrace& trace, double kappa,
                      const Metadata& meta);

/// Generic column table as CSV (all columns equal length).
void write_columns_csv(std::ostream& os, const std::vector<std::string>& names,
                       const std::vector<const std::vector<double>*>& columns,
                       const Metadata& meta);

std::string temperature_fit_json(const TemperatureFit& fit, const Metadata& meta);

} // namespace qom

#endif // QOM_TRACE_IO_HPP
