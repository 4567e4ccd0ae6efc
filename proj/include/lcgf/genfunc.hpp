#pragma once

// Generalized functions on an open interval: finite sums of monomials, each a
// Levi-Civita coefficient times smooth factors f(t - a) and singular factors
// (derivatives of delta and Heaviside steps at points c + h, h infinitesimal).
// Singular atoms stand for the mollified representatives
//   delta^{(k)}_{c+h}(x) = s^{-1-k} phi^{(k)}((x - c - h)/s),
//   H_{c+h}(x)          = Phi((x - c - h)/s).

#include "lcgf/interval.hpp"
#include "lcgf/lc_functions.hpp"
#include "lcgf/mollifier.hpp"
#include "lcgf/smooth.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lcgf {

/// Shared by every atom of an expression.
struct GfSettings {
    Mollifier mollifier = Mollifier::construct(2);
    TruncationContext ctx{};
    RealInterval domain{};  ///< open interval (lo, hi)

    friend bool operator==(const GfSettings& a, const GfSettings& b) {
        return a.mollifier == b.mollifier && a.ctx == b.ctx && a.domain == b.domain;
    }
};

/// f(t - shift); shift is any finite LC number.
struct SmoothAtom {
    SmoothFn f;
    LCReal shift;
};

struct DeltaAtom {
    double center = 0.0;
    LCReal shift;  ///< infinitesimal
    int order = 0;
};

struct HeavisideAtom {
    double center = 0.0;
    LCReal shift;  ///< infinitesimal
};

using SingularAtom = std::variant<DeltaAtom, HeavisideAtom>;

struct Monomial {
    LCComplex coef;
    std::vector<SmoothAtom> smooth;      ///< one atom per distinct shift
    std::vector<SingularAtom> singular;  ///< sorted by position
};

class GenFunction {
public:
    explicit GenFunction(GfSettings settings = {});

    const GfSettings& settings() const { return settings_; }
    const TruncationContext& context() const { return settings_.ctx; }
    const Mollifier& mollifier() const { return settings_.mollifier; }
    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Builds a canonical sum: monomials are reduced and like terms merged.
    static GenFunction from_monomials(std::vector<Monomial> terms, GfSettings settings);

    friend GenFunction operator+(const GenFunction& a, const GenFunction& b);
    friend GenFunction operator-(const GenFunction& a, const GenFunction& b);
    friend GenFunction operator*(const GenFunction& a, const GenFunction& b);
    friend GenFunction operator*(const LCComplex& c, const GenFunction& f);
    friend GenFunction operator*(std::complex<double> c, const GenFunction& f);
    GenFunction operator-() const;

    std::string to_string() const;

private:
    GfSettings settings_;
    std::vector<Monomial> terms_;
};

/// Position c + h of a singular atom.
LCReal position(const SingularAtom& a, const TruncationContext& ctx);

/// Canonical text of a monomial without its coefficient; equal keys mean equal factors.
std::string factor_key(const Monomial& m);

GenFunction embed_smooth(const SmoothFn& f, const GfSettings& settings = {});
GenFunction embed_delta(double center, int order = 0, const GfSettings& settings = {});
GenFunction embed_heaviside(double center = 0.0, const GfSettings& settings = {});
GenFunction embed_constant(const LCComplex& c, const GfSettings& settings = {});

GenFunction derive(const GenFunction& f, int times = 1);
/// f(x - h); the real part of h moves centers, the infinitesimal part moves shifts.
GenFunction translate(const GenFunction& f, const LCReal& h);
GenFunction multiply(const GenFunction& f, const GenFunction& g);
/// delta^{(k)}(a x + b) rewritten as |a|^{-1} a^{-k} delta^{(k)}(x + b/a); H(a x + b) likewise.
GenFunction compose_affine(const GenFunction& f, double a, double b);

LCComplex evaluate_at(const GenFunction& f, const LCReal& x);

/// Smooth compactly supported test function with its support interval.
struct TestFunction {
    SmoothFn fn;
    double lo = -1.0;
    double hi = 1.0;

    /// (sum_k c_k w^k) * bump(w), w = (t - center)/radius.
    static TestFunction polynomial_bump(const std::vector<double>& coeffs, double center, double radius);
    /// 1 on [a1, b1], 0 outside [a0, b0].
    static TestFunction plateau(double a0, double a1, double b1, double b0);
};

/// Delta combination plus residual terms that carry no delta factor.
struct NormalForm {
    struct DeltaTerm {
        LCReal position;
        int order = 0;
        LCComplex coef;
    };
    std::vector<DeltaTerm> deltas;
    std::vector<Monomial> residual;  ///< at most one Heaviside factor, no deltas
    GfSettings settings;
};

NormalForm normal_form(const GenFunction& f);
bool is_delta_combination(const NormalForm& nf, double tol = 1e-8);

LCComplex pairing(const GenFunction& f, const TestFunction& tau);
LCComplex pairing(const NormalForm& nf, const TestFunction& tau);

/// Pairing with a plateau equal to 1 near the (compact) external support.
LCComplex integral_compact(const GenFunction& f);

enum class Verdict { yes, no, undetermined };
const char* to_string(Verdict v);

struct BatteryOptions {
    int size = 32;
    std::uint64_t seed = 0;
    double tol = 1e-8;
};

/// Randomized polynomial-times-bump test functions around the given points.
std::vector<TestFunction> make_battery(const std::vector<double>& points, const RealInterval& domain,
                                       const BatteryOptions& options);

struct WeakEqualReport {
    Verdict verdict = Verdict::undetermined;
    std::optional<bool> normal_form;  ///< empty when the normal form is inconclusive
    bool battery = false;
    double battery_max = 0.0;  ///< largest pairing coefficient of f - g seen on the battery
};

WeakEqualReport weak_equal_report(const GenFunction& f, const GenFunction& g, const BatteryOptions& options = {});
Verdict weak_equal(const GenFunction& f, const GenFunction& g, const BatteryOptions& options = {});
bool associated(const GenFunction& f, const GenFunction& g, const BatteryOptions& options = {});

/// Closed LC interval; an empty end is infinite.
struct LCInterval {
    std::optional<LCReal> lo;
    std::optional<LCReal> hi;
};

struct SupportInfo {
    IntervalSet external;
    std::vector<LCInterval> internal;
};

SupportInfo support(const GenFunction& f);
std::string to_string(const LCInterval& i);

/// Keeps the monomials whose internal support meets the monad of (lo, hi).
GenFunction restrict_to(const GenFunction& f, const RealInterval& open);

/// (1/i!) d^i/dlambda^i f(lambda, .) as a smooth function of t.
struct ParametricFamily {
    std::string name;
    std::function<SmoothFn(std::complex<double> lambda, int i)> taylor_coefficient;
};

/// f(lambda, t) = exp(-lambda t).
ParametricFamily exponential_family();

/// sum_i eps^i (1/i!) d^i_lambda f(st lambda0, .) with eps = lambda0 - st lambda0.
GenFunction specialize_parameter(const ParametricFamily& family, const LCComplex& lambda0,
                                 const GfSettings& settings = {});

/// Taylor data of a smooth factor at an LC point: entry k is f^{(k)}(y)/k!.
std::vector<LCComplex> lc_jet(const SmoothFn& f, const LCReal& y, int order, const TruncationContext& ctx);

}  // namespace lcgf
