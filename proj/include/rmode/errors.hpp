#ifndef RMODE_ERRORS_HPP
#define RMODE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rmode {

// Base for everything the pipeline can throw. The category string is what
// the CLI prints in its machine-readable error output.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& what)
        : std::runtime_error(what), category_(std::move(category)) {}
    const std::string& category() const { return category_; }

private:
    std::string category_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class EmptyRequestError : public Error {
public:
    explicit EmptyRequestError(const std::string& what) : Error("empty-request", what) {}
};

class HistoryUnderrunError : public Error {
public:
    explicit HistoryUnderrunError(const std::string& what) : Error("history-underrun", what) {}
};

class GeometryError : public Error {
public:
    explicit GeometryError(const std::string& what) : Error("geometry", what) {}
};

class InsufficientDataError : public Error {
public:
    explicit InsufficientDataError(const std::string& what) : Error("insufficient-data", what) {}
};

class EpochMismatchError : public Error {
public:
    explicit EpochMismatchError(const std::string& what) : Error("epoch-mismatch", what) {}
};

class EmptyPartitionError : public Error {
public:
    explicit EmptyPartitionError(const std::string& what) : Error("empty-partition", what) {}
};

class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error("format", what) {}
};

class IngestError : public Error {
public:
    explicit IngestError(const std::string& what) : Error("ingest", what) {}
};

} // namespace rmode

#endif
