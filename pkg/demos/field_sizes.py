"""Field sizes needed by each construction at n = 10, mu = 5, d = 9."""
from pmds_regen.sizes import ParamPoint, check_comparison_theorem, emit_csv

points = [ParamPoint(5, 10, r, s, 9) for s in (1, 2) for r in range(1, 10) if s <= (10 - r) * 4]
print(emit_csv(points, ["A", "B", "C", "D"]))

report = check_comparison_theorem()
print(f"comparison relations over {report.points} parameter points: "
      f"{'no violations' if report.ok else report.violations}")
