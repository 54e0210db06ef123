#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace auctionkit {

// Thrown when an algorithm runs out of iterations or meets a non-finite
// value; distinct from std::invalid_argument, which covers bad inputs.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature that failed to meet tolerance still carries its best estimate.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double best_estimate, double error_bound)
        : NumericalError(what), best_estimate(best_estimate), error_bound(error_bound) {}

    double best_estimate;
    double error_bound;
};

// Root bracketing failed; endpoint values are kept for the error message
// and for callers that want to widen the bracket.
class BracketError : public NumericalError {
public:
    BracketError(const std::string& what, double f_lo, double f_hi)
        : NumericalError(what), f_lo(f_lo), f_hi(f_hi) {}

    double f_lo;
    double f_hi;
};

enum class BidMethod {
    closed_form,
    quadrature,
    taylor_approx,
};

const char* to_string(BidMethod m);

struct BidResult {
    double bid = 0.0;
    BidMethod method = BidMethod::quadrature;
    // |reference - bid| when an independent evaluation is available.
    std::optional<double> est_error;
};

}  // namespace auctionkit
