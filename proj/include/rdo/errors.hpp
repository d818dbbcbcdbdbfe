#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdo {

/// Shift b hits (or nearly hits) a scaled discrete Neumann eigenvalue.
class ResonanceError : public std::runtime_error {
public:
    ResonanceError(double b, double gamma, double mu, int k, int m, double gap)
        : std::runtime_error("resonant shift b=" + std::to_string(b) + " against gamma*mu=" +
                             std::to_string(gamma * mu) + " at mode (" + std::to_string(k) + "," +
                             std::to_string(m) + "), gap=" + std::to_string(gap)),
          b(b), gamma(gamma), mu(mu), k(k), m(m), gap(gap) {}
    double b, gamma, mu;
    int k, m;
    double gap;
};

/// Fixed-point iteration exhausted max_iter; carries the update-norm history.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(std::string what, std::vector<double> history)
        : std::runtime_error(std::move(what)), update_norms(std::move(history)) {}
    std::vector<double> update_norms;
};

/// Final V left the branch validity interval.
class BranchDomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& path, const std::string& message)
        : std::runtime_error("config error at '" + path + "': " + message), path(path) {}
    std::string path;
};

class SizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimulationTrace;

/// Time stepping produced a non-finite or absurdly large value.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double t, int i, int j, std::shared_ptr<SimulationTrace> partial)
        : std::runtime_error("blow-up at t=" + std::to_string(t) + ", cell (" + std::to_string(i) +
                             "," + std::to_string(j) + ")"),
          t(t), i(i), j(j), partial_trace(std::move(partial)) {}
    double t;
    int i, j;
    std::shared_ptr<SimulationTrace> partial_trace;
};

}  // namespace rdo
