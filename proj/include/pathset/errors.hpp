#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pathset {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OverlappingObstacles : public Error {
public:
    OverlappingObstacles(int first, int second)
        : Error("obstacles " + std::to_string(first) + " and " + std::to_string(second) + " overlap"),
          first_id(first), second_id(second) {}
    int first_id;
    int second_id;
};

class InvalidScene : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DegeneratePath : public Error {
public:
    DegeneratePath() : Error("path has zero length") {}
};

class NoPathFound : public Error {
public:
    using Error::Error;
};

class InvalidEndpoint : public Error {
public:
    using Error::Error;
};

class PassageTooNarrow : public Error {
public:
    using Error::Error;
};

class InfeasiblePassage : public Error {
public:
    using Error::Error;
};

class MissingIntersection : public Error {
public:
    using Error::Error;
};

class PlacementFailure : public Error {
public:
    using Error::Error;
};

/// Thrown by every loader. `field` is a JSON-pointer-like path ("obstacles[2].vertices")
/// or empty for syntax errors, in which case `line`/`column` locate the problem.
class ParseError : public Error {
public:
    ParseError(std::string field_path, const std::string& message, int line_no = 0, int column_no = 0)
        : Error(format(field_path, message, line_no, column_no)),
          field(std::move(field_path)), line(line_no), column(column_no) {}

    std::string field;
    int line;
    int column;

private:
    static std::string format(const std::string& f, const std::string& m, int l, int c) {
        std::string out = "parse error";
        if (l > 0) out += " at line " + std::to_string(l) + ", column " + std::to_string(c);
        if (!f.empty()) out += " in field '" + f + "'";
        return out + ": " + m;
    }
};

}  // namespace pathset
