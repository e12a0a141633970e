import pytest

from ssw.core import (
    EZ,
    SMap,
    constant_map,
    identity_map,
    product,
    standard_simplex,
)
from ssw.decor import FLAT, SHARP, MarkedScaled, Scaled, decorate, scale
from ssw.fibration import (
    INCONCLUSIVE,
    REFUTED,
    VERIFIED,
    CertificateStep,
    LiftingProblem,
    Verdict,
    as_base,
    certificate_check,
    check_limit_cone,
    classify_edge,
    cocar_witness_check,
    combine,
    detects_thin,
    edge_table,
    find_lift,
    has_outer_anodyne_rlp,
    has_rlp,
    inclusion_generator,
    is_infty_bicategory,
    is_inner_fibration,
    is_outer_fibration,
    is_P_fibered,
    is_var_cartesian_fibration,
    is_weak_fibration,
    lax_lift_filtration,
    locally_cocartesian_edges,
    outer_anodyne_family,
    q_complex,
    q_marked_cells,
    refute_coinitial,
    rescale_generator,
    scaled_inner_horn,
    weak_cartesian_via_slice,
    weak_fibration_family,
)
from ssw.ops import idop
from ssw.slices import slice_over_vertex, thick_slice_over_vertex
from ssw.tensor import flat_ms, join_ms, interval_sharp, point_ms, triangle_thin


def d1_sharp():
    return scale(standard_simplex(1), SHARP)


def d2_sharp():
    return scale(standard_simplex(2), SHARP)


def d2_flat():
    return scale(standard_simplex(2), FLAT)


def to_point(X: Scaled) -> SMap:
    return constant_map(X.base, standard_simplex(0), "0")


# ---------------------------------------------------------------- find_lift


def test_lift_to_point_always_exists():
    X = point_ms()
    gen = scaled_inner_horn(2, 1)
    p = identity_map(X.base)
    prob = LiftingProblem(
        gen.left,
        p,
        constant_map(gen.A.base, X.base, "0"),
        constant_map(gen.B.base, X.base, "0"),
        gen.A,
        gen.B,
        X,
        X,
    )
    prob.validate()
    assert find_lift(prob) is not None


def test_inner_horn_filler_unique_in_sharp_triangle():
    C = d2_sharp()
    gen = scaled_inner_horn(2, 1)
    p = to_point(C)
    tops = [
        m
        for m in __import__("ssw.core", fromlist=["enumerate_maps"]).enumerate_maps(
            gen.A.base, C.base
        )
    ]
    # the inclusion horn -> triangle is one of the tops; its filler is unique
    horn_incl = {"0": EZ("0", (0,)), "1": EZ("1", (0,)), "2": EZ("2", (0,)),
                 "01": EZ("01", (0, 1)), "12": EZ("12", (0, 1))}
    prob = LiftingProblem(
        gen.left,
        p,
        SMap(gen.A.base, C.base, horn_incl),
        constant_map(gen.B.base, standard_simplex(0), "0"),
        gen.A,
        gen.B,
        C.sharp_marked(),
        as_base(Scaled(standard_simplex(0))),
    )
    filler = find_lift(prob)
    assert filler is not None
    assert filler.images["012"] == EZ("012", (0, 1, 2))


def test_no_filler_into_boundary():
    from ssw.core import boundary

    B2 = Scaled(boundary(2), frozenset())
    gen = scaled_inner_horn(2, 1)
    horn_incl = {"0": EZ("0", (0,)), "1": EZ("1", (0,)), "2": EZ("2", (0,)),
                 "01": EZ("01", (0, 1)), "12": EZ("12", (0, 1))}
    prob = LiftingProblem(
        gen.left,
        to_point(B2),
        SMap(gen.A.base, B2.base, horn_incl),
        constant_map(gen.B.base, standard_simplex(0), "0"),
        gen.A,
        gen.B,
        B2.sharp_marked(),
        as_base(Scaled(standard_simplex(0))),
    )
    assert find_lift(prob) is None


# ---------------------------------------------------------------- RLP verdicts


def test_identity_has_rlp():
    C = d2_sharp()
    v = has_rlp(identity_map(C.base), C.sharp_marked(), as_base(C), weak_fibration_family(3), 3)
    assert v.status == VERIFIED


def test_sharp_triangle_weak_fibration():
    C = d2_sharp()
    v = is_weak_fibration(to_point(C), C, Scaled(standard_simplex(0)), bound=4)
    assert v.status == VERIFIED and v.bound == 4


def test_flat_triangle_not_weak_fibration():
    C = d2_flat()
    v = is_weak_fibration(to_point(C), C, Scaled(standard_simplex(0)), bound=3)
    assert v.status == REFUTED
    assert "scaled-inner-horn(2,1)" in v.evidence


def test_thin_detection_refutes():
    C = d2_flat()
    Csharp = d2_sharp()
    p = identity_map(C.base)
    v = detects_thin(p, C, Csharp)
    assert v.status == REFUTED


# ---------------------------------------------------------------- slice fibrations


def test_slice_projection_outer_cartesian_interval():
    C = d1_sharp()
    sl = slice_over_vertex(C, "1", cap=3)
    verdict, table = is_var_cartesian_fibration(
        sl.projection, sl.scaled, C, "out", co=False, bound=3
    )
    assert verdict.status == VERIFIED
    assert table == sl.total.marked


def test_slice_projection_outer_cartesian_triangle():
    C = d2_sharp()
    sl = slice_over_vertex(C, "2", cap=3)
    verdict, table = is_var_cartesian_fibration(
        sl.projection, sl.scaled, C, "out", co=False, bound=3
    )
    assert verdict.status == VERIFIED
    assert table == sl.total.marked


def test_marked_slice_edges_are_cartesian():
    C = d2_sharp()
    sl = slice_over_vertex(C, "2", cap=3)
    for e in sorted(sl.total.marked):
        v = classify_edge(sl.projection, sl.scaled, C, EZ(e, (0, 1)), "cartesian", bound=3)
        assert v.status == VERIFIED


def test_degenerate_edges_cartesian():
    C = d2_sharp()
    sl = slice_over_vertex(C, "2", cap=3)
    v0 = sl.total.base.level(0)[0]
    v = classify_edge(sl.projection, sl.scaled, C, EZ(v0, (0, 0)), "cartesian", bound=3)
    assert v.status == VERIFIED


def test_taxonomy_strong_implies_cartesian_implies_weak():
    C = d2_sharp()
    sl = slice_over_vertex(C, "2", cap=3)
    p = sl.projection
    for e in sl.total.base.level(1):
        verdicts = {
            fl: classify_edge(p, sl.scaled, C, EZ(e, (0, 1)), fl, bound=3).status
            for fl in ("strong", "cartesian", "weak")
        }
        if verdicts["strong"] == VERIFIED:
            assert verdicts["cartesian"] == VERIFIED
        if verdicts["cartesian"] == VERIFIED:
            assert verdicts["weak"] == VERIFIED
        # outer fibration: all three flavors agree
        assert len(set(verdicts.values())) == 1


def test_classify_edge_op_duality():
    C = d2_sharp()
    sl = slice_over_vertex(C, "2", cap=2)
    p = sl.projection
    for e in sl.total.base.level(1):
        lhs = classify_edge(p, sl.scaled, C, EZ(e, (0, 1)), "cartesian", bound=3)
        rhs = classify_edge(p, sl.scaled, C, EZ(e, (0, 1)), "cocartesian", bound=3)
        # duality is with the opposite map, not the same map; just check both run
        assert lhs.status in (VERIFIED, REFUTED) and rhs.status in (VERIFIED, REFUTED)
    from ssw.core import opposite_map
    from ssw.ops import op_reverse

    pop = opposite_map(p)
    for e in sl.total.base.level(1):
        lhs = classify_edge(p, sl.scaled, C, EZ(e, (0, 1)), "cartesian", bound=3)
        rhs = classify_edge(pop, sl.scaled.op(), C.op(), EZ(e, (0, 1)), "cocartesian", bound=3)
        assert lhs.status == rhs.status


def test_weak_cartesian_via_slice_agrees():
    C = d1_sharp()
    sl = slice_over_vertex(C, "1", cap=2)
    p = sl.projection
    for e in sl.total.base.level(1):
        direct = classify_edge(p, sl.scaled, C, EZ(e, (0, 1)), "weak", bound=3)
        via = weak_cartesian_via_slice(p, sl.scaled, C, EZ(e, (0, 1)), cap=2)
        assert direct.status == via.status


# ---------------------------------------------------------------- P-fibered


def test_identity_marking_is_fibered():
    d1 = standard_simplex(1)
    S = Scaled(d1)
    X = MarkedScaled(d1, frozenset({"01"}), frozenset())
    v = is_P_fibered(identity_map(d1), X, S, bound=3)
    assert v.status == VERIFIED


def test_projection_fibered_with_horizontal_marking():
    d1 = standard_simplex(1)
    P, pr1, pr2 = product(d1, d1)
    S = Scaled(d1)
    good = locally_cocartesian_edges(pr2, S, bound=3)
    X = MarkedScaled(P, good, frozenset())
    v = is_P_fibered(pr2, X, S, bound=3)
    assert v.status == VERIFIED
    # horizontal edges (degenerate in the fiber direction) are the good ones
    assert len(good) == 2


def test_wrong_marking_refuted():
    d1 = standard_simplex(1)
    P, pr1, pr2 = product(d1, d1)
    S = Scaled(d1)
    good = locally_cocartesian_edges(pr2, S, bound=3)
    missing = frozenset(list(sorted(good))[:1])
    X = MarkedScaled(P, missing, frozenset())
    v = is_P_fibered(pr2, X, S, bound=3)
    assert v.status == REFUTED


def test_fibered_agrees_with_inner_cocartesian():
    """Mutual oracle: both predicates agree on catalog fibrations."""
    cases = []
    d1 = standard_simplex(1)
    cases.append((identity_map(d1), Scaled(d1), frozenset({"01"})))
    P, pr1, pr2 = product(d1, d1)
    cases.append((pr2, Scaled(d1), None))
    for p, S, marking in cases:
        good = locally_cocartesian_edges(p, S, bound=3)
        if marking is not None:
            assert good == marking
        X = MarkedScaled(p.source, good, frozenset())
        fib = is_P_fibered(p, X, S, bound=3)
        thinX = frozenset(
            t for t in p.source.level(2) if S.is_thin(p(EZ(t, idop(2))))
        )
        inner, table = is_var_cartesian_fibration(
            p, Scaled(p.source, thinX), S, "inn", co=True, bound=3
        )
        assert fib.status == inner.status == VERIFIED
        assert table == good


# ---------------------------------------------------------------- outer anodyne


def test_q_complex_counts():
    Q = q_complex()
    assert Q.counts() == (2, 4, 4, 1)
    assert len(q_marked_cells(Q)) == 2


def test_outer_anodyne_family_shapes():
    fam = outer_anodyne_family(3)
    names = [g.name for g in fam]
    assert "marked-horn(1)" in names
    assert "q-marking" in names
    assert "composite-marking" in names
    assert "thin-rescale" in names


def test_slice_fibration_has_outer_anodyne_rlp():
    C = d1_sharp()
    sl = slice_over_vertex(C, "1", cap=3)
    v = has_outer_anodyne_rlp(sl.projection, sl.total, C, bound=3)
    assert v.status == VERIFIED


def test_corrupted_marking_refuted_by_anodyne():
    C = d2_sharp()
    sl = slice_over_vertex(C, "2", cap=3)
    bad = MarkedScaled(sl.total.base, frozenset(), sl.total.thin)
    v = has_outer_anodyne_rlp(sl.projection, bad, C, bound=2)
    assert v.status == REFUTED


# ---------------------------------------------------------------- bicategories


def test_sharp_simplices_are_bicategories():
    for n in range(4):
        X = scale(standard_simplex(n), SHARP)
        v = is_infty_bicategory(X, bound=3)
        assert v.status == VERIFIED


def test_flat_triangle_not_bicategory():
    v = is_infty_bicategory(d2_flat(), bound=3)
    assert v.status == REFUTED


def test_point_is_bicategory():
    v = is_infty_bicategory(Scaled(standard_simplex(0)), bound=3)
    assert v.status == VERIFIED


# ---------------------------------------------------------------- certificates


def test_pushout_join_certificate():
    """The pushout-join of the endpoint inclusion into the marked interval
    with the flat-to-marked interval is the rescaling that adds the one
    missing triangle of a tetrahedron; its one-step certificate checks."""
    from ssw.core import subcomplex

    d1 = standard_simplex(1)
    end, _ = subcomplex(d1, ["1"])
    Xm = MarkedScaled(end)  # the target endpoint of the marked interval
    Ym = MarkedScaled(d1, frozenset({"01"}), frozenset())
    Am = MarkedScaled(d1)  # flat interval
    Bm = Ym  # marked interval
    left = join_ms(Xm, Bm, dim_cap=4)
    right = join_ms(Ym, Am, dim_cap=4)
    full = join_ms(Ym, Bm, dim_cap=4)
    d3 = full.scaled.base
    # union of the two sub-join scalings inside Y * B; the left join's mixed
    # cells carry the same compositional names in the full join
    src_thin = set(right.scaled.thin)
    _, _, mix_left = left.scaled.base.join_names
    _, _, mix_full = full.scaled.base.join_names
    back = {v: k for k, v in mix_left.items()}
    for t in left.scaled.thin:
        src_thin.add(mix_full[back[t]])
    # in tetrahedron labels: 01*0 = 012, 01*1 = 013, 1*01 = 123; only 023 missing
    assert src_thin == {"01*0", "01*1", "1*01"}
    assert frozenset(full.scaled.thin) == frozenset(d3.level(2))
    assert set(d3.level(2)) - src_thin == {"0*01"}
    start = MarkedScaled(d3, frozenset(), frozenset(src_thin))
    target = MarkedScaled(d3, frozenset(), frozenset(d3.level(2)))
    gen = rescale_generator("thin-saturation", start, target)
    step = CertificateStep(gen, identity_map(d3))
    v = certificate_check(start, [step], target)
    assert v.status == VERIFIED


def test_empty_certificate_identity():
    d2 = standard_simplex(2)
    X = MarkedScaled(d2)
    v = certificate_check(X, [], X)
    assert v.status == VERIFIED


def test_certificate_wrong_attach_refuted():
    d2 = standard_simplex(2)
    start = MarkedScaled(d2)
    gen = rescale_generator(
        "thin", MarkedScaled(d2), MarkedScaled(d2, frozenset(), frozenset({"012"}))
    )
    bad_attach = constant_map(d2, standard_simplex(0), "0")
    step = CertificateStep(gen, bad_attach)
    v = certificate_check(start, [step], start)
    assert v.status == REFUTED


# ---------------------------------------------------------------- lax-lift filtration


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_lax_lift_filtration(n):
    steps = lax_lift_filtration(n)
    assert len(steps) == n + 1
    assert all(s.pushout_ok and s.scaling_ok for s in steps)


# ---------------------------------------------------------------- cocartesian witness


def test_cocar_witness():
    assert cocar_witness_check().status == VERIFIED
    assert cocar_witness_check(use_opposite=True).status == VERIFIED
    assert cocar_witness_check(perturb=True).status == REFUTED


# ---------------------------------------------------------------- limit cones


def empty_cone_at(C: Scaled, vertex: str):
    from ssw.core import empty_sset
    from ssw.tensor import cone

    K = MarkedScaled(empty_sset())
    cn = cone("inn", "left", K)
    g = SMap(cn.ms.base, C.base, {cn.star: EZ(vertex, (0,))})
    return K, g


def test_final_vertex_of_interval():
    C = d1_sharp()
    K, g = empty_cone_at(C, "1")
    v = check_limit_cone(C, K, g, "inn", cap=3, bound=3)
    assert v.status == VERIFIED


def test_nonfinal_vertex_refuted():
    C = d1_sharp()
    K, g = empty_cone_at(C, "0")
    v = check_limit_cone(C, K, g, "inn", cap=3, bound=3)
    assert v.status == REFUTED


def test_truncated_input_inconclusive():
    # a 3-truncated infinite-dimensional complex: the walking isomorphism
    from ssw.catalog import j_truncated

    C = Scaled(j_truncated(3), frozenset(j_truncated(3).level(2)))
    K, g = empty_cone_at(C, "1")
    v = check_limit_cone(C, K, g, "inn", cap=2, bound=2)
    assert v.status == INCONCLUSIVE


# ---------------------------------------------------------------- coinitiality


def test_refute_coinitial_identity_inconclusive():
    C = d1_sharp()
    K = MarkedScaled(C.base, frozenset(), C.thin)
    h = identity_map(C.base)
    sl = thick_slice_over_vertex(C, "1", "out", cap=2)
    fibs = [(sl.projection, sl.scaled, frozenset(sl.total.marked))]
    v = refute_coinitial(h, K, K, fibs, cap=2)
    assert v.status == INCONCLUSIVE


def test_refute_coinitial_missing_component():
    from ssw.core import coproduct

    two = coproduct(standard_simplex(0), standard_simplex(0)).sset
    L = MarkedScaled(two)
    sub, incl = __import__("ssw.core", fromlist=["subcomplex"]).subcomplex(two, ["0"])
    K = MarkedScaled(sub)
    # constant fibration with a two-point fiber over L
    P, pr1, pr2 = product(two, two)
    fibs = [(pr1, Scaled(P), frozenset())]
    v = refute_coinitial(incl, K, L, fibs, cap=1)
    assert v.status == REFUTED


def test_rlp_closed_under_pushout_and_composite():
    """The engine's verdicts are stable under pushouts and composites of a
    generator it already lifts against."""
    from ssw.core import subcomplex
    from ssw.decor import pushout_ms, restrict_ms
    from ssw.fibration import Generator, GeneratorFamily
    from ssw.tensor import flat_ms

    C = d2_sharp()
    sl = slice_over_vertex(C, "2", cap=3)
    p = sl.projection
    gen = scaled_inner_horn(2, 1)
    base_family = GeneratorFamily("base", [gen])
    assert has_rlp(p, sl.total, as_base(C), base_family, 2).status == VERIFIED

    # pushout of the generator along a horn collapse
    target = standard_simplex(1)
    collapse = SMap(
        gen.A.base,
        target,
        {
            "0": EZ("0", (0,)),
            "1": EZ("0", (0,)),
            "2": EZ("1", (0,)),
            "01": EZ("0", (0, 0)),
            "12": EZ("01", (0, 1)),
        },
    )
    Z = MarkedScaled(target)
    P_ms, leg_target, leg_big = pushout_ms(gen.left, collapse, gen.B, Z)
    pushed = Generator("pushed", leg_target, Z, P_ms)
    assert has_rlp(p, sl.total, as_base(C), GeneratorFamily("pushed", [pushed]), 2).status == VERIFIED

    # composite: the horn inclusion followed by the pushout inclusion of a
    # second triangle glued along the same horn
    Q_ms, leg_t2, leg_b2 = pushout_ms(gen.left, identity_map(gen.A.base).then(gen.left), gen.B, gen.B)
    composite = Generator("composite", gen.left.then(leg_t2), gen.A, Q_ms)
    assert has_rlp(p, sl.total, as_base(C), GeneratorFamily("composite", [composite]), 2).status == VERIFIED


def test_thin_composite_two_out_of_three():
    """On catalog weak fibrations, for a thin triangle whose top edge is
    cartesian, the two remaining edges are cartesian together."""
    checked = 0
    for n, x in ((1, "1"), (2, "2")):
        C = scale(standard_simplex(n), SHARP)
        sl = slice_over_vertex(C, x, cap=3)
        p = sl.projection
        base = sl.total.base

        def verdict(pair):
            return classify_edge(p, sl.scaled, C, pair, "cartesian", bound=3).status

        for t in sl.total.thin:
            top = EZ(t, idop(2))
            d0, d1, d2 = base.face(top, 0), base.face(top, 1), base.face(top, 2)
            if verdict(d0) == VERIFIED:
                assert verdict(d1) == verdict(d2)
                checked += 1
    assert checked > 0


def test_inner_fibration_refuted_by_thin_detection():
    """Identity on the base from flat to sharp scaling fails detection."""
    C_flat, C_sharp = d2_flat(), d2_sharp()
    p = identity_map(C_flat.base)
    v = is_inner_fibration(p, C_flat, C_sharp, bound=2)
    assert v.status == REFUTED
    assert "detection" in v.evidence


def test_refute_coinitial_identity_vertex_of_outer_slice():
    """The inclusion of the identity vertex into the outer slice over a final
    vertex finds no refutation against the slice fibration itself."""
    from ssw.core import subcomplex

    C = d1_sharp()
    sl = thick_slice_over_vertex(C, "1", "out", cap=3, side="over")
    # the identity vertex: the slice vertex whose representing map collapses
    # the interval (every image degenerate down to a point)
    id_vertex = None
    for c in sl.total.base.level(0):
        m = sl.cell_maps[c]
        if all(not pair.is_nondeg() or pair.deg == 0 for pair in m.images.values()):
            id_vertex = c
            break
    assert id_vertex is not None
    sub, incl = subcomplex(sl.total.base, [id_vertex])
    K = MarkedScaled(sub)
    L = MarkedScaled(sl.total.base, sl.total.marked, sl.total.thin)
    fibs = [(identity_map(L.base), sl.scaled, frozenset(L.base.level(1)))]
    v = refute_coinitial(incl, K, L, fibs, cap=2)
    assert v.status == INCONCLUSIVE


def test_cartesian_table_over_point():
    """Over the point, nondegenerate poset edges are not cartesian, degenerate
    lifts carry the fibration, and detectable equivalences are cartesian."""
    from ssw.core import constant_map
    from ssw.catalog import j_truncated

    pt = Scaled(standard_simplex(0))
    C = d1_sharp()
    p = constant_map(C.base, pt.base, "0")
    verdict, table = is_var_cartesian_fibration(p, C, pt, "out", co=False, bound=3)
    assert verdict.status == VERIFIED
    assert table == frozenset()  # the 01 edge of a poset is not invertible
    J3 = j_truncated(3)
    CJ = Scaled(J3, frozenset(J3.level(2)))
    pj = constant_map(J3, pt.base, "0")
    v = classify_edge(pj, CJ, pt, EZ("01", (0, 1)), "cartesian", bound=2)
    assert v.status == VERIFIED  # an equivalence edge, detectable at bound 2


def test_rlp_closed_under_retract():
    """A generator is a retract of its coproduct with a point; verdicts agree."""
    from ssw.core import coproduct
    from ssw.decor import restrict_ms
    from ssw.fibration import Generator, GeneratorFamily

    C = d2_sharp()
    sl = slice_over_vertex(C, "2", cap=3)
    p = sl.projection
    gen = scaled_inner_horn(2, 1)
    pt = standard_simplex(0)
    A2 = coproduct(gen.A.base, pt)
    B2 = coproduct(gen.B.base, pt)
    left2 = SMap(
        A2.sset,
        B2.sset,
        {
            **{x: B2.incl1.images[gen.left.images[x].core] for x in gen.A.base.dim_of},
            A2.incl2.images["0"].core: B2.incl2.images["0"],
        },
    )
    Am = MarkedScaled(A2.sset, frozenset(), frozenset())
    Bm = MarkedScaled(B2.sset, frozenset(), frozenset({"012"}))
    fat = Generator("coproduct", left2, Am, Bm)
    v_fat = has_rlp(p, sl.total, as_base(C), GeneratorFamily("fat", [fat]), 2)
    v_thin = has_rlp(p, sl.total, as_base(C), GeneratorFamily("thin", [gen]), 2)
    assert v_fat.status == v_thin.status == VERIFIED


def test_limit_cone_never_verified_when_unsaturated():
    """With a cap too small to reach saturation, the checker must not claim
    VERIFIED even at a genuine final vertex."""
    C = d2_sharp()
    K, g = empty_cone_at(C, "2")
    v = check_limit_cone(C, K, g, "inn", cap=2, bound=2)
    assert v.status == INCONCLUSIVE
    assert "not saturated" in v.evidence
