#!/usr/bin/env python3
"""Regenerates data/surfaces and data/malformed."""
import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FLAT = {"E": "1", "F": "0", "G": "1"}
STEREO = {"E": "4/(1+u^2+v^2)^2", "F": "0", "G": "4/(1+u^2+v^2)^2"}
CIRCLE = [{"id": "rim", "curve": {"u": "cos(2*pi*t)", "v": "sin(2*pi*t)"}}]


def num(x):
    return repr(float(x)) if x != int(x) else str(int(x))


def lin(a, b):
    """Expression of t for the segment a -> b in one coordinate."""
    if a == b:
        return num(a)
    d = b - a
    if a == 0:
        return "t" if d == 1 else f"{num(d)}*t"
    return f"{num(a)}+{num(d)}*t" if d > 0 else f"{num(a)}-{num(-d)}*t"


def square(pid, u0=0, u1=1, v0=0, v1=1, corners=True):
    pts = [(u0, v0), (u1, v0), (u1, v1), (u0, v1)]
    names = ["bottom", "right", "top", "left"]
    arcs = []
    for i in range(4):
        a, b = pts[i], pts[(i + 1) % 4]
        arc = {"id": names[i], "curve": {"u": lin(a[0], b[0]), "v": lin(a[1], b[1])}}
        if corners:
            arc["corners"] = [{"id": f"c{i}", "at": "start"}]
        arcs.append(arc)
    return {"id": pid, "domain": {"type": "rect", "bounds": [u0, u1, v0, v1]}, "metric": FLAT,
            "boundary": arcs}


def seam(p1, a1, p2, a2, phi="u", orientation="preserving", sid=None):
    s = {"side1": {"patch": p1, "arc": a1}, "side2": {"patch": p2, "arc": a2}, "phi": phi,
         "orientation": orientation}
    if sid:
        s["id"] = sid
    return s


def doc(patches, seams=(), cones=(), polyhedron=None):
    d = {"version": 1, "patches": list(patches), "seams": list(seams)}
    if cones:
        d["cone_points"] = list(cones)
    if polyhedron:
        d["polyhedron"] = polyhedron
    return d


def double_square():
    arcs = ["bottom", "right", "top", "left"]
    return doc([square("A"), square("B")],
               [seam("A", a, "B", a, sid=a) for a in arcs],
               [{"id": f"v{i}", "cycle": [{"patch": "A", "corner": f"c{i}", "theta": "pi/2"},
                                         {"patch": "B", "corner": f"c{i}"}]} for i in range(4)])


def disc(pid, metric):
    return {"id": pid, "domain": {"type": "disc"}, "metric": metric, "boundary": CIRCLE}


def triangle(pid):
    arcs = [("e0", "t", "0"), ("e1", "1-t", "t"), ("e2", "0", "1-t")]
    return {"id": pid, "domain": {"type": "triangle"}, "metric": {"E": "1", "F": "1/2", "G": "1"},
            "boundary": [{"id": a, "curve": {"u": u, "v": v}, "corners": [{"id": f"c{i}", "at": "start"}]}
                         for i, (a, u, v) in enumerate(arcs)]}


def double_triangle():
    return doc([triangle("A"), triangle("B")],
               [seam("A", e, "B", e, sid=e) for e in ("e0", "e1", "e2")],
               [{"id": f"v{i}", "cycle": [{"patch": "A", "corner": f"c{i}"},
                                         {"patch": "B", "corner": f"c{i}"}]} for i in range(3)])


def flat_strip():
    return doc([square("A"), square("B", 1, 2, 0, 1)],
               [seam("A", "right", "B", "left", phi="1-u", orientation="reversing", sid="mid")])


def four_squares():
    q = [square("Q1", 0, 1, 0, 1), square("Q2", -1, 0, 0, 1), square("Q3", -1, 0, -1, 0),
         square("Q4", 0, 1, -1, 0)]
    # Corner at the origin: Q1 c0, Q2 c1, Q3 c2, Q4 c3.
    seams = [
        seam("Q1", "left", "Q2", "right", phi="1-u", orientation="reversing", sid="north"),
        seam("Q2", "bottom", "Q3", "top", phi="1-u", orientation="reversing", sid="west"),
        seam("Q3", "right", "Q4", "left", phi="1-u", orientation="reversing", sid="south"),
        seam("Q4", "top", "Q1", "bottom", phi="1-u", orientation="reversing", sid="east"),
    ]
    cone = {"id": "y", "cycle": [{"patch": "Q1", "corner": "c0"}, {"patch": "Q2", "corner": "c1"},
                                 {"patch": "Q3", "corner": "c2"}, {"patch": "Q4", "corner": "c3"}]}
    return doc(q, seams, [cone])


def cube_patches():
    # Each face: origin and two unit axes in R^3, chosen so (e1, e2, outward) is right-handed.
    faces = {
        "bottom": ((0, 1, 0), (1, 0, 0), (0, -1, 0)),
        "top": ((0, 0, 1), (1, 0, 0), (0, 1, 0)),
        "front": ((0, 0, 0), (1, 0, 0), (0, 0, 1)),
        "back": ((1, 1, 0), (-1, 0, 0), (0, 0, 1)),
        "left": ((0, 1, 0), (0, -1, 0), (0, 0, 1)),
        "right": ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    }

    def at(f, u, v):
        o, a, b = faces[f]
        return tuple(o[k] + u * a[k] + v * b[k] for k in range(3))

    corners2d = [(0, 0), (1, 0), (1, 1), (0, 1)]
    names = ["bottom", "right", "top", "left"]
    edges = {}
    vertex_corners = {}
    for f in faces:
        for i in range(4):
            p, q = at(f, *corners2d[i]), at(f, *corners2d[(i + 1) % 4])
            edges.setdefault(frozenset((p, q)), []).append((f, names[i], p, q))
            vertex_corners.setdefault(p, []).append((f, f"c{i}"))
    seams = []
    for k, (key, sides) in enumerate(sorted(edges.items(), key=lambda kv: sorted(kv[0]))):
        (f1, a1, p1, _), (f2, a2, p2, _) = sides
        same = p1 == p2
        seams.append(seam(f1, a1, f2, a2, phi="u" if same else "1-u",
                          orientation="preserving" if same else "reversing", sid=f"e{k}"))
    cones = []
    for k, (v, cs) in enumerate(sorted(vertex_corners.items())):
        cones.append({"id": f"v{k}", "cycle": [{"patch": f, "corner": c} for f, c in cs]})
    return doc([square(f) for f in faces], seams, cones)


def polyhedron(vertex_angles, chi=2):
    return {"version": 1, "polyhedron": {"chi": chi, "vertices": [
        {"id": f"v{i}", "angles": a} for i, a in enumerate(vertex_angles)]}}


def main():
    out = ROOT / "data" / "surfaces"
    out.mkdir(parents=True, exist_ok=True)
    surfaces = {
        "double_square": double_square(),
        "double_disc": doc([disc("A", FLAT), disc("B", FLAT)], [seam("A", "rim", "B", "rim", sid="rim")]),
        "two_hemispheres": doc([disc("N", STEREO), disc("S", STEREO)],
                               [seam("N", "rim", "S", "rim", sid="equator")]),
        "disc_hemisphere": doc([disc("H", STEREO), disc("D", FLAT)],
                               [seam("H", "rim", "D", "rim", sid="rim")]),
        "double_triangle": double_triangle(),
        "flat_strip": flat_strip(),
        "four_squares": four_squares(),
        "cube_patches": cube_patches(),
        "cube": polyhedron([["pi/2"] * 3] * 8),
        "tetrahedron": polyhedron([["pi/3"] * 3] * 4),
    }
    for name, d in surfaces.items():
        (out / f"{name}.json").write_text(json.dumps(d, indent=2) + "\n")

    bad = ROOT / "data" / "malformed"
    bad.mkdir(parents=True, exist_ok=True)
    ds = double_square()
    dd = surfaces["double_disc"]

    def variant(base, mutate):
        d = json.loads(json.dumps(base))
        mutate(d)
        return json.dumps(d, indent=2) + "\n"

    malformed = {
        "phi_squared": variant(dd, lambda d: d["seams"][0].update(phi="u^2")),
        "phi_not_onto": variant(dd, lambda d: d["seams"][0].update(phi="u/2")),
        "orientation_mismatch": variant(dd, lambda d: d["seams"][0].update(orientation="reversing")),
        "unknown_field": variant(dd, lambda d: d["patches"][0]["metric"].update(H="1")),
        "unknown_top_level": variant(dd, lambda d: d.update(comment="x")),
        "missing_metric": variant(dd, lambda d: d["patches"][0].pop("metric")),
        "expr_syntax": variant(dd, lambda d: d["patches"][0]["metric"].update(E="1 +* u")),
        "expr_unknown_identifier": variant(dd, lambda d: d["patches"][1]["metric"].update(G="w^2")),
        "curve_uses_u": variant(dd, lambda d: d["patches"][0]["boundary"][0]["curve"].update(u="cos(u)")),
        "indefinite_metric": variant(dd, lambda d: d["patches"][0]["metric"].update(E="-1")),
        "arc_off_boundary": variant(dd, lambda d: d["patches"][0]["boundary"][0]["curve"].update(
            u="0.5*cos(2*pi*t)", v="0.5*sin(2*pi*t)")),
        "clockwise_boundary": variant(dd, lambda d: d["patches"][0]["boundary"][0]["curve"].update(
            v="-sin(2*pi*t)")),
        "unknown_patch_ref": variant(dd, lambda d: d["seams"][0]["side2"].update(patch="Z")),
        "unknown_arc_ref": variant(dd, lambda d: d["seams"][0]["side1"].update(arc="edge")),
        "arc_glued_twice": variant(ds, lambda d: d["seams"].append(seam("A", "left", "B", "right"))),
        "missing_cone_point": variant(ds, lambda d: d.pop("cone_points")),
        "cone_theta_mismatch": variant(ds, lambda d: d["cone_points"][0]["cycle"][0].update(theta=1.5)),
        "cone_incomplete_cycle": variant(ds, lambda d: d["cone_points"][1]["cycle"].pop()),
        "cone_unknown_corner": variant(ds, lambda d: d["cone_points"][2]["cycle"][0].update(corner="c9")),
        "duplicate_patch_id": variant(ds, lambda d: d["patches"][1].update(id="A")),
        "wrong_version": variant(dd, lambda d: d.update(version=2)),
        "bad_domain_type": variant(dd, lambda d: d["patches"][0]["domain"].update(type="annulus")),
        "rect_without_bounds": variant(ds, lambda d: d["patches"][0]["domain"].pop("bounds")),
        "chi_not_integer": variant(dd, lambda d: d["patches"][0].update(chi=1.5)),
        "seams_not_array": variant(dd, lambda d: d.update(seams={"a": 1})),
        "polyhedron_bad_angle": json.dumps(polyhedron([[-1.0, 2.0, 2.0]])) + "\n",
        "truncated_json": json.dumps(dd)[:80],
        "empty": "",
        "not_an_object": "[1, 2, 3]\n",
    }
    for name, text in malformed.items():
        (bad / f"{name}.json").write_text(text)


if __name__ == "__main__":
    main()
