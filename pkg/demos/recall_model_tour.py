"""Tour of the closed-form recall model.

One crisis batch forces the full withdrawal of every order containing a
piece of it, so an order's recall probability is 1 - (1-p)^f where f is
its fragment count. Raising to the expected (generally fractional) count
gives the headline formula

    R_S = Q * (1 - (1 - Pu_B) ** ((O + B - 1) / B))

and the exact two-point mixture over both possible counts is available
for comparison (it can only be smaller; averaging inside a concave map
beats averaging outside). The script walks the worked example, the
boundary rows, and both asymptotes.
"""

from batchfrag import (
    ModelParams,
    expected_recall_size,
    recall_limit_batch_inf,
    recall_limit_order_inf,
    recall_probability,
    recall_probability_exact,
    recall_size_formula,
)


def main() -> None:
    params = ModelParams(order_size=10, batch_size=4, total_quantity=50,
                         crisis_prob=0.15)
    print("worked example: O=10, B=4, Q=50, p=0.15")
    print(f"  recall probability (fractional exponent)  "
          f"{recall_probability(params):.6f}")
    print(f"  recall probability (exact mixture)        "
          f"{recall_probability_exact(params):.6f}")
    print(f"  expected recall size                      "
          f"{expected_recall_size(params):.6f} of 50")

    print("\nunit-order row is flat at Q*p for every batch size:")
    for b in (1, 10, 1000):
        v = expected_recall_size(ModelParams(1, b, 50, 0.15))
        print(f"  B={b:<5} -> {v}")

    print("\nasymptotes:")
    print(f"  B -> inf leaves Q*p = {recall_limit_batch_inf(50, 0.15)}")
    print(f"    (at B=10^9 the formula gives "
          f"{recall_size_formula(50, 10, 10**9, 0.15):.9f})")
    print(f"  O -> inf recalls everything = {recall_limit_order_inf(50)}")
    print(f"    (at O=10^6 the formula gives "
          f"{recall_size_formula(50, 10**6, 10, 0.15):.6f})")

    n = 10**6
    print("\nequal huge orders and batches keep exactly two expected "
          "fragments:")
    print(f"  O=B={n}: {recall_size_formula(50, n, n, 0.15):.6f} "
          f"vs Q*(1-(1-p)^2) = {50 * (1 - 0.85**2):.6f}")


if __name__ == "__main__":
    main()
