#pragma once

// CSV artifacts. Every writer has a matching reader; numbers are written in
// shortest round-trip form so reruns are byte-identical.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "dqwifi/analysis.hpp"
#include "dqwifi/dcf_model.hpp"
#include "dqwifi/deltaq.hpp"

namespace dqwifi {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

/// Plain comma-separated values, no quoting. Throws std::runtime_error on a
/// row whose width differs from the header.
CsvTable read_csv(std::istream& in);
void write_csv(std::ostream& out, const CsvTable& table);

/// `delay_us,cdf` rows in delay order; the last cdf is the delivered mass.
void write_cdf_csv(std::ostream& out, const DeltaQ& d);
DeltaQ read_cdf_csv(std::istream& in);

struct RawOutcome {
  std::size_t replication = 0;
  int station = 0;
  Outcome outcome = Outcome::Delivered;
  Micros latency = 0.0;
};

/// `replication,station,outcome,latency_us` with outcome delivered|lost.
void write_outcome_dump(std::ostream& out, const std::vector<RawOutcome>& rows);
std::vector<RawOutcome> read_outcome_dump(std::istream& in);
std::vector<RawOutcome> to_raw(const std::vector<PacketEvent>& events,
                               std::size_t replication);

/// `replication,tte_us`.
void write_tte_dump(std::ostream& out, const std::vector<Micros>& tte);
std::vector<Micros> read_tte_dump(std::istream& in);

/// `n_stations,packet_size_bytes,percent_change`.
void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells);
std::vector<HeatmapCell> read_heatmap_csv(std::istream& in);

}  // namespace dqwifi
