#include "dqwifi/csv.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include "dqwifi/params_io.hpp"

namespace dqwifi {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void expect_header(const CsvTable& t, const std::vector<std::string>& header) {
  if (t.header != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw std::runtime_error("unexpected CSV header, want " + want);
  }
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no CSV column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw std::runtime_error("CSV line " + std::to_string(line_no) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw std::runtime_error("CSV input has no header");
  return t;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto emit = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
}

void write_cdf_csv(std::ostream& out, const DeltaQ& d) {
  CsvTable t{{"delay_us", "cdf"}, {}};
  const std::vector<Atom> atoms = d.atoms();
  double acc = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    acc += atoms[i].mass;
    const double value = i + 1 == atoms.size() ? d.delivered_mass() : acc;
    t.rows.push_back({format_double(atoms[i].delay), format_double(value)});
  }
  write_csv(out, t);
}

DeltaQ read_cdf_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"delay_us", "cdf"});
  std::vector<Atom> atoms;
  double previous = 0.0;
  for (const auto& row : t.rows) {
    const double cdf = parse_double(row[1]);
    if (cdf < previous) throw std::runtime_error("CDF column decreases");
    atoms.push_back(Atom{parse_double(row[0]), cdf - previous});
    previous = cdf;
  }
  return DeltaQ::from_atoms(std::move(atoms));
}

std::vector<RawOutcome> to_raw(const std::vector<PacketEvent>& events,
                               std::size_t replication) {
  std::vector<RawOutcome> out;
  out.reserve(events.size());
  for (const PacketEvent& e : events) {
    out.push_back(RawOutcome{replication, e.station, e.outcome, e.latency});
  }
  return out;
}

void write_outcome_dump(std::ostream& out, const std::vector<RawOutcome>& rows) {
  out << "replication,station,outcome,latency_us\n";
  for (const RawOutcome& r : rows) {
    out << r.replication << ',' << r.station << ','
        << (r.outcome == Outcome::Delivered ? "delivered" : "lost") << ','
        << format_double(r.latency) << '\n';
  }
}

std::vector<RawOutcome> read_outcome_dump(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"replication", "station", "outcome", "latency_us"});
  std::vector<RawOutcome> out;
  for (const auto& row : t.rows) {
    RawOutcome r;
    r.replication = static_cast<std::size_t>(parse_int(row[0]));
    r.station = static_cast<int>(parse_int(row[1]));
    if (row[2] == "delivered") {
      r.outcome = Outcome::Delivered;
    } else if (row[2] == "lost") {
      r.outcome = Outcome::Lost;
    } else {
      throw std::runtime_error("unknown outcome '" + row[2] + "'");
    }
    r.latency = parse_double(row[3]);
    out.push_back(r);
  }
  return out;
}

void write_tte_dump(std::ostream& out, const std::vector<Micros>& tte) {
  out << "replication,tte_us\n";
  for (std::size_t i = 0; i < tte.size(); ++i) {
    out << i << ',' << format_double(tte[i]) << '\n';
  }
}

std::vector<Micros> read_tte_dump(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"replication", "tte_us"});
  std::vector<Micros> out(t.rows.size());
  for (const auto& row : t.rows) {
    const auto rep = static_cast<std::size_t>(parse_int(row[0]));
    if (rep >= out.size()) throw std::runtime_error("replication index out of range");
    out[rep] = parse_double(row[1]);
  }
  return out;
}

void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells) {
  out << "n_stations,packet_size_bytes,percent_change\n";
  for (const HeatmapCell& c : cells) {
    out << c.n_stations << ',' << c.packet_size << ',' << format_double(c.percent_change)
        << '\n';
  }
}

std::vector<HeatmapCell> read_heatmap_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"n_stations", "packet_size_bytes", "percent_change"});
  std::vector<HeatmapCell> out;
  for (const auto& row : t.rows) {
    HeatmapCell c;
    c.n_stations = static_cast<int>(parse_int(row[0]));
    c.packet_size = static_cast<int>(parse_int(row[1]));
    c.percent_change = parse_double(row[2]);
    out.push_back(c);
  }
  return out;
}

}  // namespace dqwifi
