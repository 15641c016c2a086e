#ifndef DRMX_ERRORS_HPP
#define DRMX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace drmx {

// Exit-code categories used by the CLI: 1 usage, 2 parse, 3 resource, 4 internal.
enum class ErrorKind { Usage = 1, Parse = 2, Resource = 3, Internal = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::string msg, int line, int col)
        : Error(ErrorKind::Parse,
                "syntax error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

class ResourceExceeded : public Error {
public:
    explicit ResourceExceeded(std::string msg) : Error(ErrorKind::Resource, std::move(msg)) {}
};

class InternalError : public Error {
public:
    explicit InternalError(std::string msg) : Error(ErrorKind::Internal, std::move(msg)) {}
};

} // namespace drmx

#endif
