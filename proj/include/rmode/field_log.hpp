#ifndef RMODE_FIELD_LOG_HPP
#define RMODE_FIELD_LOG_HPP

#include <string>
#include <vector>

#include "rmode/clock_time.hpp"
#include "rmode/receiver.hpp"

namespace rmode {

// One line of the open receiver-log schema. The native format of deployed
// receivers is not public, so ingestion targets this CSV; columns beyond
// the four required ones are ignored, which lets simulator-produced
// epochs.csv files round-trip through the same path.
struct FieldLogRecord {
    LocalTimestamp timestamp;
    ToneId tone_id = ToneId::cw1;
    double snr_db = 0.0;
    double range_m = 0.0;
};

struct IngestReport {
    std::vector<RangeEpoch> epochs; // error_m filled from the surveyed truth range
    std::size_t rows_total = 0;     // data rows seen (well-formed or not)
    std::size_t rows_malformed = 0;
    std::size_t gated_out = 0;      // below the SNR gate (excluded from analysis downstream)
    bool empty_warning = false;
    std::vector<std::string> malformed_detail; // first few offending lines
};

// Reads a field log, stamps errors against truth_range_m, and applies the
// SNR gate. Malformed rows (bad numbers, unknown tone, timestamps running
// backwards) are counted, not silently dropped; more than 1% malformed
// aborts with IngestError. A missing/unusable header is a FormatError.
IngestReport ingest_log(const std::string& path, double truth_range_m, double gate_db = 7.0);
IngestReport ingest_log_text(const std::string& text, double truth_range_m, double gate_db = 7.0,
                             const std::string& origin = "<string>");

} // namespace rmode

#endif
