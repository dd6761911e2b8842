#pragma once

#include <stdexcept>
#include <string>

namespace kinebench {

// Base for all toolkit errors. Subtypes exist so callers can react to a
// specific failure without parsing messages.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- skeleton ---------------------------------------------------------------
class MissingSourceJoint : public Error {
public:
    explicit MissingSourceJoint(const std::string& name)
        : Error("harmonization map references absent source joint: " + name), name_(name) {}
    const std::string& name() const { return name_; }
private:
    std::string name_;
};

class MissingRequiredTarget : public Error {
public:
    explicit MissingRequiredTarget(const std::string& name)
        : Error("no mapping for required canonical joint: " + name), name_(name) {}
    const std::string& name() const { return name_; }
private:
    std::string name_;
};

class InvalidMap : public Error {
public:
    using Error::Error;
};

// --- kinematics -------------------------------------------------------------
class UnknownMarker : public Error {
public:
    explicit UnknownMarker(const std::string& name)
        : Error("marker not present in joint set: " + name), name_(name) {}
    const std::string& name() const { return name_; }
private:
    std::string name_;
};

class UnknownAngle : public Error {
public:
    explicit UnknownAngle(const std::string& name)
        : Error("no angle definition named: " + name) {}
};

class UnknownActivity : public Error {
public:
    explicit UnknownActivity(const std::string& id)
        : Error("activity has no configured angle: " + id) {}
};

// --- dsp --------------------------------------------------------------------
class EmptySignal : public Error {
public:
    using Error::Error;
    EmptySignal() : Error("signal has no valid samples") {}
};

class WindowTooLarge : public Error {
public:
    using Error::Error;
};

class EvenWindow : public Error {
public:
    using Error::Error;
};

// --- align ------------------------------------------------------------------
class InsufficientOverlap : public Error {
public:
    using Error::Error;
    InsufficientOverlap() : Error("series overlap shorter than 2 samples") {}
};

class RateMismatch : public Error {
public:
    using Error::Error;
};

// --- metrics ----------------------------------------------------------------
class LengthMismatch : public Error {
public:
    using Error::Error;
    LengthMismatch() : Error("series lengths differ") {}
};

class ZeroRange : public Error {
public:
    ZeroRange() : Error("reference signal has zero range (max == min)") {}
};

class ZeroVariance : public Error {
public:
    ZeroVariance() : Error("series is constant; variance is zero") {}
};

class EmptyInput : public Error {
public:
    EmptyInput() : Error("empty input") {}
};

// --- ingest -----------------------------------------------------------------
class IoError : public Error {
public:
    using Error::Error;
};

class MalformedHeader : public Error {
public:
    using Error::Error;
};

class RaggedRow : public Error {
public:
    RaggedRow(std::size_t line, const std::string& detail)
        : Error("line " + std::to_string(line) + ": " + detail), line_(line) {}
    std::size_t line() const { return line_; }
private:
    std::size_t line_;
};

class NoFrames : public Error {
public:
    NoFrames() : Error("file contains no data rows") {}
};

class MissingEndHeader : public Error {
public:
    MissingEndHeader() : Error("no 'endheader' line found") {}
};

class ColumnCountMismatch : public Error {
public:
    using Error::Error;
};

class NonNumericCell : public Error {
public:
    NonNumericCell(std::size_t line, std::size_t col, const std::string& token)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(col) +
                ": not a number: '" + token + "'") {}
};

class UnknownColumn : public Error {
public:
    explicit UnknownColumn(const std::string& name)
        : Error("no such column: " + name) {}
};

class UnknownModelKind : public Error {
public:
    explicit UnknownModelKind(const std::string& kind)
        : Error("unknown model kind: " + kind) {}
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& detail) : Error("manifest schema: " + detail) {}
};

class UnresolvablePath : public Error {
public:
    explicit UnresolvablePath(const std::string& path)
        : Error("path does not resolve to a file: " + path) {}
};

// --- report -----------------------------------------------------------------
class MixedActivities : public Error {
public:
    MixedActivities() : Error("records span more than one activity") {}
};

} // namespace kinebench
