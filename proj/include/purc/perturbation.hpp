#pragma once

namespace purc {

// Strictly convex link-flow perturbation F with F(0) = F'(0) = 0 and
// (F')^-1(y) = 0 for y <= 0. The inverse-derivative map is what turns node
// potentials into link flows, so instances must keep the four maps mutually
// consistent: inv_deriv(deriv(x)) == x for x >= 0.
class Perturbation {
  public:
    virtual ~Perturbation() = default;

    virtual double value(double x) const = 0;            // F(x), x >= 0
    virtual double deriv(double x) const = 0;            // F'(x)
    virtual double inv_deriv(double y) const = 0;        // (F')^-1(y)
    virtual double inv_deriv_deriv(double y) const = 0;  // d/dy (F')^-1, 0 for y <= 0

    // 1 / F''(x): the flow response to a unit potential change at flow level
    // x. Continuous at x = 0 (unlike inv_deriv_deriv at y = 0), which is what
    // the diagonal scaling and the time update need on zero-flow links.
    virtual double hessian_bound(double x) const = 0;

    virtual const char* name() const = 0;
};

// F(x) = (1+x)ln(1+x) - x. Flows out of the loading map are exp(y) - 1,
// exactly zero below the cost threshold.
class EntropyPerturbation final : public Perturbation {
  public:
    double value(double x) const override;
    double deriv(double x) const override;
    double inv_deriv(double y) const override;
    double inv_deriv_deriv(double y) const override;
    double hessian_bound(double x) const override { return 1.0 + x; }
    const char* name() const override { return "entropy"; }
};

const Perturbation& entropy_perturbation();

}  // namespace purc
