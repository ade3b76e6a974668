"""Walk through the bundled examples with the Python API.

    python3 demos/walkthrough.py
"""
from importlib import resources

from cmsyzygy import build_algebra, load
from cmsyzygy.catalog import enumerate_cmp, stable_summary
from cmsyzygy.dimer import analyze, cm_minimal
from cmsyzygy.reduction import functor_F, ideal_J, module_tag, quotient_algebra, reduction_report
from cmsyzygy.skew import fibered_product, minimality_transfer_check, skew_quiver


def bundled(name):
    return load(str(resources.files("cmsyzygy") / "data" / name))


def five_vertex():
    pq = bundled("ex314.qp")
    a = build_algebra(pq.quiver, pq.relations)
    print(f"A: dim {a.dim}, dimension vector {a.dim_vector()}")
    cat = enumerate_cmp(a)
    print(f"{len(cat)} indecomposable CM modules, {len(cat.nonprojective())} non-projective")
    for e in cat.entries:
        print("  ", e.describe())

    j = ideal_J(a, "5")
    print("J at 5:", j.describe())
    rep = reduction_report(a, "5", catalog=cat)
    print("verdicts:", rep.verdicts)
    for k, w in rep.witnesses.items():
        print(f"  ({k}) {w}")

    b = quotient_algebra(a, "5")
    cat_b = enumerate_cmp(b)
    ss = stable_summary(cat, j, cat_b)
    for x, y in ss.image.items():
        fx = functor_F(j, cat.entries[x].rep, b)
        print(f"  F({cat.entries[x].label}) = {module_tag(fx)}  -> {cat_b.entries[y].label}")


def gluing():
    pq = bundled("fig42_q0.qp")
    an = analyze(pq.quiver, pq.potential)
    print(f"base tree: total weight {an.total_weight}, {an.cm_type}, minimal {cm_minimal(an).minimal}")
    q, w, g = fibered_product(pq.quiver, pq.potential, "alpha")
    sq = skew_quiver(q, g)
    print(f"glued: {len(q.vertices)} vertices; skew quiver {len(sq.quiver.vertices)} vertices, "
          f"{len(sq.quiver.arrows)} arrows")
    tr = minimality_transfer_check(pq.quiver, pq.potential, "alpha")
    print(f"A minimal {tr.a_minimal}, AG minimal {tr.ag_minimal}, AG type {tr.ag_type.label}")


if __name__ == "__main__":
    five_vertex()
    print()
    gluing()
