#ifndef LPDO_ERRORS_HPP
#define LPDO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lpdo {

// Math-level failures (division by structural zero, missing derivative rule,
// unsupported inputs). The CLI maps these to exit code 2.
class MathError : public std::runtime_error {
public:
    explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
public:
    ParseError(size_t line, size_t col, const std::string& what)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + what),
          line_(line), col_(col) {}
    size_t line() const { return line_; }
    size_t col() const { return col_; }

private:
    size_t line_, col_;
};

class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace lpdo

#endif
