"""Smoke test for the `smu` extension module. Run after `maturin develop` or installing the wheel."""

import math

import smu


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    assert close(smu.erf(1.0), 0.842700792949715)
    assert smu.erf(-2.5) == -smu.erf(2.5)

    p = smu.SmuParams(alpha=0.25, mu=1.0)
    assert smu.smu(0.0, p) == 0.0
    assert close(smu.smu_dx(0.0, p), 0.625)
    assert close(smu.smu(3.0, p), smu.smooth_max_erf(3.0, 0.75, 1.0))
    assert smu.smu_dmu(1.5, p) > 0.0
    assert close(smu.smu1(0.0, p), 0.5)

    cls = smu.SmuParams.from_preset("classification", "smu1")
    assert cls.mu == 4.352665993287951e-09 and cls.alpha == 0.25

    gelu = smu.Activation("gelu")
    # 1 / math.sqrt(2) rounds one ulp low; sqrt(0.5) is the correctly rounded value
    rec = smu.Activation("smu", alpha=0.0, mu=math.sqrt(0.5))
    for i in range(-50, 51):
        x = i / 10
        assert rec(x) == gelu(x)
    assert close(gelu(1.0), 0.841344746068543)

    reports = smu.gradcheck("smu")
    assert len(reports) == 99 and all(r["passed"] for r in reports)

    features, labels = smu.two_moons(n=100, noise=0.1, seed=1)
    assert len(features) == 100 and sorted(set(labels)) == [0, 1]

    result = smu.train(samples=300, epochs=40, model="2x16x2", seed=2)
    assert result["train_accuracy"] > 0.8, result["train_accuracy"]
    assert result["mu_initial"] == [1.0]
    assert result["log_csv"].startswith("epoch,split,loss,accuracy,mu_layer0\n")

    try:
        smu.Activation("bogus")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown activation accepted")

    try:
        smu.train(samples=100, epochs=3, lr=1e200, optimizer="sgd", activation="relu")
    except FloatingPointError:
        pass
    else:
        raise AssertionError("divergence not reported")

    print("smoke test passed:", rec, p, f"train accuracy {result['train_accuracy']:.3f}")


if __name__ == "__main__":
    main()
