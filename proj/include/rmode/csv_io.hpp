#ifndef RMODE_CSV_IO_HPP
#define RMODE_CSV_IO_HPP

#include <string>
#include <vector>

#include "rmode/experiment.hpp"

namespace rmode {

// Shortest-round-trip decimal for a double (std::to_chars), so values
// survive write -> ingest -> write bit-exactly and outputs are identical
// across runs.
std::string fmt_double(double v);

// epochs.csv: every epoch, gated or not; starts with the FieldLogRecord
// columns so the file re-ingests through `analyze`.
// timestamp,tone,snr_db,range_m,epoch_time_s,local_tod_s,phase_cycles,integer_cycles,alpha,gated,error_m
std::string epochs_csv(std::span<const RangeEpoch> epochs, const std::string& start_date,
                       int utc_offset_min);

// stats_<label>.csv: one row per tone plus the pooled "ALL" row.
std::string stats_csv(const std::vector<ErrorStats>& rows);

// histogram_<label>.csv: shared-edge bins, one row group per tone + ALL.
std::string histogram_csv(const std::vector<ErrorStats>& rows);

// Reads back files written by the two functions above (for `compare`).
std::vector<ErrorStats> read_stats_csv(const std::string& path);
void read_histogram_csv(const std::string& path, std::vector<ErrorStats>& into);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace rmode

#endif
