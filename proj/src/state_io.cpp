#include <cmath>
#include <ostream>
#include <sstream>

#include "qbf/csv.hpp"
#include "qbf/errors.hpp"
#include "qbf/states.hpp"

namespace qbf {

MomentumState load_sampled_state(std::istream& in, const QuadratureGrid& declared,
                                 const PhysicalScales& scales) {
  const CsvTable table = read_csv(in);
  if (table.header != std::vector<std::string>{"p", "re", "im"})
    throw InvalidArgument("state csv: header must be 'p,re,im'");
  if (table.rows.size() != declared.size()) {
    std::ostringstream msg;
    msg << "state csv: " << table.rows.size() << " rows, declared grid has " << declared.size()
        << " nodes";
    throw InvalidArgument(msg.str());
  }
  std::vector<complex> amps(table.rows.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const double p = parse_real(row[0]);
    const double node = declared.node(i);
    if (std::fabs(p - node) > 1e-12 * std::max(1.0, std::fabs(node))) {
      std::ostringstream msg;
      msg << "state csv row " << i + 1 << ": p = " << p << " does not match node " << node;
      throw InvalidArgument(msg.str());
    }
    amps[i] = complex(parse_real(row[1]), parse_real(row[2]));
    norm += declared.weight(i) * std::norm(amps[i]);
  }
  if (!(norm >= 0.99 && norm <= 1.01)) {
    std::ostringstream msg;
    msg << "state csv: norm " << norm << " outside [0.99, 1.01]";
    throw InvalidArgument(msg.str());
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : amps) a *= scale;
  return MomentumState::sampled(declared, std::move(amps), scales);
}

void save_sampled_state(std::ostream& out, const MomentumState& state) {
  const MomentumState initial = state.at_time(0.0);
  const std::vector<complex> amps = initial.nodal_amplitudes();
  out << "p,re,im\n";
  for (std::size_t i = 0; i < amps.size(); ++i)
    out << csv_line({format_real(state.grid().node(i)), format_real(amps[i].real()),
                     format_real(amps[i].imag())})
        << '\n';
}

}  // namespace qbf
