"""The three edge measures and how edges get ranked for pruning.

Forman curvature is a local degree formula, Ollivier curvature compares
neighborhood measures by optimal transport, and betweenness counts
shortest-path traffic. Low curvature or high betweenness marks an edge
as load bearing; the pruning order removes the other end of the scale
first.
"""

from curvprune import UndirectedGraph, ebc, frc, orc, rank_edges, score_table

# two triangles joined by one bridge: the classic bridge-vs-cluster picture
g = UndirectedGraph.build(
    range(6), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
)

print("edge  FRC   ORC     EBC")
betweenness = ebc(g).as_dict()
for e in g.edges:
    print(f"{e}  {frc(g, e):3d}  {str(orc(g, e)):>5s}  {betweenness[e]}")

# the bridge (2, 3) is the most negatively curved and the busiest edge
print("\nmost significant edge per measure (kept longest):")
for measure in ("FRC", "ORC", "EBC"):
    print(f"  {measure}: {rank_edges(g, measure)[0]}")

# rankings are score tables plus a direction; inverting the direction
# flips what counts as significant
print("\nFRC ranking, default vs inverted:")
print("  default :", rank_edges(g, "FRC", "default"))
print("  inverted:", rank_edges(g, "FRC", "inverted"))

# scores stay exact rationals until the CSV boundary
table = score_table(g, "ORC")
print("\nexact ORC scores:", dict(table.scores))
