#include "dcesim/errors.hpp"

#include <sstream>

namespace dcesim {

namespace {

std::string describe(const std::string& what, int column, double time) {
    std::ostringstream os;
    os << what << " (column m=" << column << ", t=" << time << ")";
    return os.str();
}

}  // namespace

IntegrationFailure::IntegrationFailure(const std::string& what, int column, double time)
    : std::runtime_error(describe(what, column, time)), column_(column), time_(time) {}

}  // namespace dcesim
