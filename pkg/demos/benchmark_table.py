"""
Price a ten-year term policy across initial hazard levels and split the
risk-adjusted price into its parts:

    price per contract = net premium + mortality charge + finite charge

The mortality charge (P - net) is the systematic part that no amount of
pooling removes; the finite charge (A/n - P) shrinks as the pool grows.
"""

from sharpelife.pricing import BENCHMARK_GRID, BENCHMARK_PARAMS, BENCHMARK_TABLE, build_table

table = build_table(BENCHMARK_PARAMS, BENCHMARK_GRID, list(BENCHMARK_TABLE), n=1, method="nearest")

print(f"{'lambda0':>8} {'net':>8} {'P':>8} {'A':>8} {'B':>8} {'mort.':>8} {'finite':>8}")
for r in table.rows:
    print(
        f"{r.lambda0:8.4f} {r.net_premium:8.4f} {r.P:8.4f} {r.A_per_contract:8.4f} "
        f"{r.B_per_contract:8.4f} {r.mortality_charge:8.4f} {r.finite_charge:8.4f}"
    )

worst = max(
    abs(getattr(r, c) - BENCHMARK_TABLE[r.lambda0][i])
    for r in table.rows
    for i, c in enumerate(("net_premium", "P", "A_per_contract", "B_per_contract"))
)
print(f"\nlargest deviation from the reference table: {worst:.1e}")
