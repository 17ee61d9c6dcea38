"""Smoke test for the pyhyperpoly extension module.

Build and install first:
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/pyhyperpoly-*.whl
"""

import math

import pyhyperpoly as hp


def main():
    h = hp.PolyFamily.hermite()
    lag = hp.PolyFamily.laguerre(0.0)
    assert abs(h.eval_classical(3, 0.5) - (8 * 0.125 - 12 * 0.5)) < 1e-13
    assert lag.eigenvalue(5) == 5.0

    measured, lower, upper, ok = hp.hermite_norm_sandwich(30, 4.0)
    assert ok and lower <= measured <= upper
    print(f"||h_30||_4: log {measured:.6f} in [{lower:.6f}, {upper:.6f}]")

    slope = hp.growth_slope(h, 2.0, 4.0, list(range(30, 61)))
    assert abs(slope / (0.5 * math.log(3)) - 1) < 0.05
    print(f"Hermite growth slope {slope:.5f}")

    sqrt = hp.BernsteinFn.sqrt()
    best = max(hp.log_eigen_lower_bound(h, sqrt, 1.0, 2.0, 4.0, n) for n in range(1, 61))
    assert best > math.log(1e6)
    print(f"best eigenfunction lower bound e^{best:.3f}")

    drift = hp.BernsteinFn.from_json('{"a":0,"b":0.5}')
    c = hp.classify_ou(drift, 1.0, 2.0, 4.0)
    assert c["verdict"] == "blow-up" and abs(c["threshold"] - (1 + math.e)) < 1e-15
    assert hp.classify_ou(drift, 1.0, 2.0, 2.0)["verdict"] == "bounded"
    assert hp.bilinear_test(drift, 1.0, 2.0, 4.0)["verdict"] == "BlowUpCertified"

    assert hp.poisson_kernel_identity(1.0, 2.0) < 1e-8
    assert abs(hp.heat_kernel_mass(0.5, -0.5, 0.1, 0.3) - 1) < 1e-8
    assert hp.necessary_condition_violation(sqrt, 1.0, 0.0, 2.0, 4.0) is not None

    rs = [0.01, 0.1, 1.0, 10.0]
    got = hp.transformed_power_rate(sqrt, "super", 1.0, 1.0, rs)
    assert all(g == 4 * (r * r / 8) ** -1 or abs(g / (4 * (r * r / 8) ** -1) - 1) < 1e-15 for g, r in zip(got, rs))

    assert hp.jacobi_laguerre_residual(4, 0.0, 1e4, 1.0) < 1e-2
    n, beta0, log_bound = hp.degeneration(0.0, 1.0, 2.0, 4.0, 10.0)
    assert math.exp(log_bound) > 20
    print(f"degeneration certificate n = {n}, beta0 = {beta0:g}")

    try:
        hp.PolyFamily.laguerre(-2.0)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")
    print("smoke test passed")


if __name__ == "__main__":
    main()
