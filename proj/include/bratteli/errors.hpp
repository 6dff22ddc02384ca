#pragma once

#include <stdexcept>
#include <string>

namespace bratteli {

struct FiniteDiagramExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidPrefix : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MaxPathNoExtension : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PrefixLengthMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DiagramMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotExtreme : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotRank2 : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PatternMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CountOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bratteli
