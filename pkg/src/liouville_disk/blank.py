"""Words of Blank: escape-segment crossing records, contraction, Seifert
splitting, and the extendability verdict for closed curves.

Each bounded face of the arrangement sends a ray from its witness point to
the unbounded region; every transversal hit of the curve contributes a
letter (face name, index from the face end, sign).  The sign convention is
the determinant [ray direction | curve direction]: positive means the curve
crosses from the right and reads '+'.  Reading the letters in curve order
gives the cyclic word; full contraction (no minus left) together with a
positive rotation index is the necessary pair of conditions for the curve
to bound an immersion of the disk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrangement import Arrangement, build_arrangement
from .curves import PolyCurve, fillet_corners, rotation_index, self_intersections, wrap_angle
from .errors import DecompositionCorrupt, RayCastFailed

TWO_PI = 2.0 * np.pi
ANGULAR_GUARD = 1e-3
N_RAY_DIRECTIONS = 64
EXHAUSTIVE_LIMIT = 16


@dataclass(frozen=True)
class Letter:
    face: str
    index: int
    sign: int  # +1 or -1

    def __str__(self):
        return f"{self.face}{self.index}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class BlankWord:
    """Cyclic sequence of signed, indexed letters."""

    letters: tuple

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return " ".join(str(l) for l in self.letters)

    def rotations(self):
        n = len(self.letters)
        for r in range(max(n, 1)):
            yield BlankWord(self.letters[r:] + self.letters[:r])

    def renamed(self) -> "BlankWord":
        """Faces renamed a, b, c, ... in order of first appearance."""
        mapping = {}
        out = []
        for l in self.letters:
            if l.face not in mapping:
                mapping[l.face] = chr(ord("a") + len(mapping))
            out.append(Letter(mapping[l.face], l.index, l.sign))
        return BlankWord(tuple(out))

    def canonical(self) -> str:
        """Lexicographically minimal rotation after canonical renaming; two
        words are the same cyclic word iff their canonical strings agree."""
        if not self.letters:
            return ""
        return min(str(rot.renamed()) for rot in self.rotations())

    def to_json(self) -> dict:
        return {
            "letters": [[l.face, l.index, "+" if l.sign > 0 else "-"] for l in self.letters],
            "canonical": self.canonical(),
        }

    @classmethod
    def parse(cls, text: str) -> "BlankWord":
        letters = []
        for tok in text.split():
            face = tok[0]
            sign = 1 if tok[-1] == "+" else -1
            letters.append(Letter(face, int(tok[1:-1]), sign))
        return cls(tuple(letters))


@dataclass
class RayRecord:
    face: str
    origin: np.ndarray
    direction: np.ndarray
    hits: list  # (ray_param, edge_index, edge_t, sign), sorted by ray_param


@dataclass
class WordRecord:
    word: BlankWord
    rays: dict  # face -> RayRecord
    positions: list  # curve parameter of each letter, aligned with word.letters
    points: list  # hit points, aligned with word.letters


def _ray_curve_hits(origin, direction, vertices, span: float):
    """Crossings of the ray [origin, origin + span*direction] with curve edges.
    Returns (ok, hits); ok is False when any hit is non-generic."""
    a = vertices
    b = np.roll(vertices, -1, axis=0)
    ex = b - a
    ox, oy = origin
    ux, uy = direction
    denom = ux * ex[:, 1] - uy * ex[:, 0]
    rel = a - origin
    with np.errstate(divide="ignore", invalid="ignore"):
        r_param = (rel[:, 0] * ex[:, 1] - rel[:, 1] * ex[:, 0]) / denom
        t_param = (rel[:, 0] * uy - rel[:, 1] * ux) / denom
    hits = []
    margin = 1e-9
    for k in range(len(a)):
        if abs(denom[k]) < 1e-12:
            continue
        r, t = r_param[k], t_param[k]
        if r <= margin or r >= span:
            continue
        if t < -margin or t > 1 + margin:
            continue
        if t < 1e-6 or t > 1 - 1e-6:
            return False, []  # grazes an edge endpoint
        edge_dir = ex[k] / np.hypot(*ex[k])
        det = ux * edge_dir[1] - uy * edge_dir[0]
        if abs(det) < np.sin(0.05):
            return False, []  # near-tangential hit
        hits.append((float(r), int(k), float(t), 1 if det > 0 else -1))
    hits.sort()
    return True, hits


def _direction_admissible(origin, direction, guard_points):
    """Reject directions passing within the angular guard of a marked point."""
    rel = guard_points - origin
    norms = np.hypot(rel[:, 0], rel[:, 1])
    ok = norms > 1e-12
    rel = rel[ok] / norms[ok, None]
    cross = direction[0] * rel[:, 1] - direction[1] * rel[:, 0]
    dot = direction[0] * rel[:, 0] + direction[1] * rel[:, 1]
    return not np.any((np.abs(cross) < ANGULAR_GUARD) & (dot > 0))


def blank_word(c: PolyCurve, arr: Arrangement | None = None, seed: int = 0) -> WordRecord:
    """Word of Blank for a curve in generic position.

    Per bounded face, 64 candidate ray directions (rotated by a seed-derived
    offset) are tried in order; the admissible one with the fewest crossings
    wins, deterministically by face id then direction index.
    """
    if arr is None:
        arr = build_arrangement(c)
    v = c.vertices
    diameter = float(np.max(np.hypot(*(v - v.mean(axis=0)).T))) * 2.0
    span = 3.0 * max(diameter, 1.0)
    guard_points = np.vstack(
        [v] + [x.point[None, :] for x in arr.crossings] + [v[sorted(c.corners)]]
        if c.corners
        else [v] + [x.point[None, :] for x in arr.crossings]
    )
    rng = np.random.default_rng(seed)
    offset = rng.uniform(0.0, TWO_PI / N_RAY_DIRECTIONS)

    rays = {}
    letters = []
    for face in arr.bounded_faces:
        best = None
        for d_idx in range(N_RAY_DIRECTIONS):
            ang = offset + TWO_PI * d_idx / N_RAY_DIRECTIONS
            u = np.array([np.cos(ang), np.sin(ang)])
            if not _direction_admissible(face.witness, u, guard_points):
                continue
            ok, hits = _ray_curve_hits(face.witness, u, v, span)
            if not ok or not hits:
                continue
            if best is None or len(hits) < len(best[1]):
                best = (u, hits)
        if best is None:
            raise RayCastFailed(
                f"no admissible escape ray among {N_RAY_DIRECTIONS} directions "
                f"for face {face.id}"
            )
        u, hits = best
        rays[face.id] = RayRecord(face=face.id, origin=face.witness, direction=u, hits=hits)
        for index, (r, k, t, sign) in enumerate(hits):
            letters.append((k + t, Letter(face.id, index, sign), face.witness + r * u))

    letters.sort(key=lambda item: item[0])
    return WordRecord(
        word=BlankWord(tuple(l for _, l, _ in letters)),
        rays=rays,
        positions=[p for p, _, _ in letters],
        points=[pt for _, _, pt in letters],
    )


# --- contraction -------------------------------------------------------------

@dataclass(frozen=True)
class ContractionStep:
    minus_pos: int
    plus_pos: int
    removed: tuple
    word_after: tuple


@dataclass
class ContractionResult:
    contracted: bool
    steps: list
    final: BlankWord
    order: str  # "leftmost" or "exhaustive"

    @property
    def n_pieces(self) -> int:
        return len(self.steps) + 1


def _contraction_moves(letters):
    """All admissible (minus_pos, plus_pos) pairs: a minus letter and a
    same-face plus letter with no other minus cyclically between them."""
    n = len(letters)
    moves = []
    for p in range(n):
        if letters[p].sign > 0:
            continue
        q = (p - 1) % n
        while q != p:
            if letters[q].sign < 0:
                break
            if letters[q].face == letters[p].face:
                moves.append((p, q))
            q = (q - 1) % n
    return moves


def _apply_move(letters, p, q):
    """Delete the closed cyclic interval [q .. p] (walking forward from q to p)."""
    n = len(letters)
    if q <= p:
        removed = letters[q : p + 1]
        rest = letters[:q] + letters[p + 1 :]
    else:
        removed = letters[q:] + letters[: p + 1]
        rest = letters[p + 1 : q]
    return tuple(removed), tuple(rest)


def contract(word: BlankWord) -> ContractionResult:
    """Greedy leftmost-first contraction with an exhaustive fallback.

    The deterministic order scans minus letters from the canonical start and
    pairs each with the nearest admissible plus letter walking backward.  If
    it gets stuck and the word has at most 16 letters, all contraction orders
    are searched before declaring the word non-contractible (the greedy order
    is not known to be confluent).
    """
    letters = tuple(word.letters)
    steps = []
    while True:
        if all(l.sign > 0 for l in letters):
            return ContractionResult(True, steps, BlankWord(letters), "leftmost")
        moves = _contraction_moves(letters)
        if not moves:
            break
        # leftmost minus, then nearest plus walking backward
        p, q = min(moves, key=lambda pq: (pq[0], (pq[0] - pq[1]) % max(len(letters), 1)))
        removed, letters = _apply_move(letters, p, q)
        steps.append(ContractionStep(p, q, removed, letters))
    if len(word) <= EXHAUSTIVE_LIMIT:
        found = _contract_exhaustive(tuple(word.letters), [], set())
        if found is not None:
            return ContractionResult(True, found, BlankWord(()), "exhaustive")
    return ContractionResult(False, steps, BlankWord(letters), "leftmost")


def _contract_exhaustive(letters, steps, seen):
    if all(l.sign > 0 for l in letters):
        return steps
    key = BlankWord(letters).canonical()
    if key in seen:
        return None
    seen.add(key)
    for p, q in _contraction_moves(letters):
        removed, rest = _apply_move(letters, p, q)
        found = _contract_exhaustive(
            rest, steps + [ContractionStep(p, q, removed, rest)], seen
        )
        if found is not None:
            return found
    return None


# --- Seifert decomposition ---------------------------------------------------

def _round_junction(pts_in, pts_out):
    """Blend the last edge of pts_in into the first edge of pts_out with a
    short quadratic arc so the smoothing respects the C1 proxy."""
    corner = pts_in[-1]
    a = pts_in[-2]
    b = pts_out[1]
    la = np.hypot(*(corner - a))
    lb = np.hypot(*(b - corner))
    trim = 0.4 * min(la, lb)
    p0 = corner + (a - corner) * (trim / la)
    p2 = corner + (b - corner) * (trim / lb)
    ang = abs(wrap_angle(np.arctan2(*(b - corner)[::-1]) - np.arctan2(*(corner - a)[::-1])))
    n_pts = max(int(np.ceil(ang / 0.2)) + 2, 4)
    t = np.linspace(0.0, 1.0, n_pts)[:, None]
    blend = (1 - t) ** 2 * p0 + 2 * t * (1 - t) * corner + t**2 * p2
    return blend


def seifert_decompose(c: PolyCurve, crossings=None):
    """Orientation-respecting smoothing of every crossing.

    Returns a list of (vertices, orientation) pairs: simple closed polylines
    with orientation +1 (counter-clockwise) or -1.  The signed orientations
    sum to the rotation index of the input.
    """
    if crossings is None:
        crossings = self_intersections(c)
    if not crossings:
        area_sign = 1 if _polygon_area(c.vertices) > 0 else -1
        return [(c.vertices.copy(), area_sign)]
    v = c.vertices
    m = c.m
    passages = []
    for cid, x in enumerate(crossings):
        passages.append((x.param_first, cid))
        passages.append((x.param_second, cid))
    passages.sort()
    n_pass = len(passages)

    # strand k runs from passage k to passage k+1
    strands = []
    for k in range(n_pass):
        p_start, cid_start = passages[k]
        p_end, cid_end = passages[(k + 1) % n_pass]
        pts = [crossings[cid_start].point]
        i0 = int(np.floor(p_start))
        i1 = int(np.floor(p_end)) if p_end > p_start else int(np.floor(p_end)) + m
        for idx in range(i0 + 1, i1 + 1):
            pts.append(v[idx % m])
        pts.append(crossings[cid_end].point)
        arr = np.asarray(pts)
        keep = np.ones(len(arr), dtype=bool)
        keep[1:] = np.hypot(*(arr[1:] - arr[:-1]).T) > 1e-12
        strands.append(arr[keep])

    # passages of each crossing; smoothing rewires in1->out2, in2->out1
    by_crossing = {}
    for k, (_p, cid) in enumerate(passages):
        by_crossing.setdefault(cid, []).append(k)
    succ = {}
    for cid, (k1, k2) in by_crossing.items():
        succ[(k1 - 1) % n_pass] = k2
        succ[(k2 - 1) % n_pass] = k1

    seen = set()
    pieces = []
    for start in range(n_pass):
        if start in seen:
            continue
        chain = []
        k = start
        while k not in seen:
            seen.add(k)
            chain.append(k)
            k = succ.get(k)
            if k is None:
                raise DecompositionCorrupt("open strand after reconnection")
        pts_parts = []
        for idx, k in enumerate(chain):
            nxt = strands[chain[(idx + 1) % len(chain)]]
            blend = _round_junction(strands[k], nxt)
            pts_parts.append(strands[k][1:-1])
            pts_parts.append(blend)
        piece = np.vstack(pts_parts)
        d = np.hypot(*np.diff(np.vstack([piece, piece[:1]]), axis=0).T)
        piece = piece[np.concatenate([[True], d[:-1] > 1e-12])]
        orient = 1 if _polygon_area(piece) > 0 else -1
        pieces.append((piece, orient))

    total = sum(o for _, o in pieces)
    idx = rotation_index(c).index
    if total != idx:
        raise DecompositionCorrupt(
            f"signed orientations sum to {total}, rotation index is {idx}"
        )
    return pieces


def _polygon_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


# --- extendability -----------------------------------------------------------

@dataclass
class ExtendabilityReport:
    index: int
    index_ok: bool
    word: BlankWord
    word_contracts: bool
    contraction: ContractionResult
    gluing: dict | None  # piece indices r_j and the identity check

    def to_json(self) -> dict:
        out = {
            "index": self.index,
            "index_ok": self.index_ok,
            "word": self.word.to_json(),
            "word_contracts": self.word_contracts,
            "contraction_order": self.contraction.order,
            "n_pieces": self.contraction.n_pieces,
        }
        if self.gluing is not None:
            out["gluing"] = self.gluing
        return out


def extendability_check(c: PolyCurve, seed: int = 0) -> ExtendabilityReport:
    """Both necessary conditions for bounding an immersed disk: rotation index
    at least 1, and a fully contractible word of Blank.

    For contractible words the report exposes the gluing identity
    r = sum_j r_j - (n - 1) over the contraction pieces, each piece being the
    deleted curve stretch closed up along its escape segment.
    """
    rep = rotation_index(c)
    work = fillet_corners(c) if c.corners else c
    arr = build_arrangement(work)
    rec = blank_word(work, arr, seed=seed)
    res = contract(rec.word)
    gluing = None
    if res.contracted and res.order == "leftmost" and res.steps:
        try:
            r_pieces = _gluing_indices(work, rec, res)
            total = sum(r_pieces) - (len(r_pieces) - 1)
            gluing = {
                "piece_indices": r_pieces,
                "identity_holds": total == rep.index,
                "identity_value": total,
            }
        except Exception:  # the report is advisory; the verdict stands
            gluing = None
    return ExtendabilityReport(
        index=rep.index,
        index_ok=rep.index >= 1,
        word=rec.word,
        word_contracts=res.contracted,
        contraction=res,
        gluing=gluing,
    )


def _resample_segment(a, b, step):
    n = max(int(np.ceil(np.hypot(*(b - a)) / step)), 2)
    t = np.linspace(0.0, 1.0, n + 1)[:-1, None]
    return (1 - t) * a + t * b


def _gluing_indices(c: PolyCurve, rec: WordRecord, res: ContractionResult):
    """Rotation indices of the contraction pieces.

    The boundary starts as the full curve with every letter's hit point
    inserted as a vertex; each contraction step cuts the stretch from the
    matched plus letter to its minus letter and closes both sides along the
    escape-segment chord between the two hit points.
    """
    step_len = float(np.median(c.edge_lengths()))
    # boundary polyline with letter hit points as tracked vertices
    events = sorted(zip(rec.positions, range(len(rec.positions))))
    pts = []
    letter_vertex = {}
    m = c.m
    ev_idx = 0
    for i in range(m):
        pts.append(c.vertices[i])
        while ev_idx < len(events) and int(np.floor(events[ev_idx][0])) == i:
            pos, letter_id = events[ev_idx]
            letter_vertex[letter_id] = len(pts)
            pts.append(np.asarray(rec.points[letter_id]))
            ev_idx += 1
    boundary = np.asarray(pts)
    # ids of word letters in word order
    order = [letter_id for _pos, letter_id in events]
    labels = [None] * len(boundary)
    for letter_id, vidx in letter_vertex.items():
        labels[vidx] = letter_id

    indices = []
    for st in res.steps:
        # word positions refer to the current word; recover the letter ids
        plus_id = order[st.plus_pos]
        minus_id = order[st.minus_pos]
        removed_ids = [order[(st.plus_pos + k) % len(order)] for k in range(len(st.removed))]
        for rid in removed_ids:
            order.remove(rid)
        a_idx = _find_label(labels, plus_id)
        b_idx = _find_label(labels, minus_id)
        piece_pts = _cyclic_slice(boundary, labels, a_idx, b_idx)
        A, B = boundary[a_idx], boundary[b_idx]
        bridge_back = _resample_segment(B, A, step_len)
        piece = np.vstack([piece_pts["pts"], bridge_back])
        indices.append(_loose_rotation_index(piece))
        # remaining boundary: other side plus bridge A -> B
        bridge_fwd = _resample_segment(A, B, step_len)
        boundary = np.vstack([piece_pts["rest_pts"], bridge_fwd])
        labels = piece_pts["rest_labels"] + [None] * len(bridge_fwd)
    indices.append(_loose_rotation_index(boundary))
    return indices


def _find_label(labels, letter_id):
    for k, l in enumerate(labels):
        if l == letter_id:
            return k
    raise KeyError(letter_id)


def _cyclic_slice(boundary, labels, a_idx, b_idx):
    n = len(boundary)
    if a_idx <= b_idx:
        sel = list(range(a_idx, b_idx + 1))
        rest = list(range(b_idx, n)) + list(range(0, a_idx + 1))
    else:
        sel = list(range(a_idx, n)) + list(range(0, b_idx + 1))
        rest = list(range(b_idx, a_idx + 1))
    return {
        "pts": boundary[sel],
        "rest_pts": boundary[[r for r in rest]],
        "rest_labels": [labels[r] for r in rest],
    }


def _loose_rotation_index(pts: np.ndarray) -> int:
    """Turning number of a closed polyline allowing sharp (transversal)
    junction corners; no C1 proxy enforcement."""
    d = np.diff(np.vstack([pts, pts[:1]]), axis=0)
    keep = np.hypot(d[:, 0], d[:, 1]) > 1e-12
    d = d[keep]
    ang = np.arctan2(d[:, 1], d[:, 0])
    turn = wrap_angle(np.roll(ang, -1) - ang)
    return int(round(float(np.sum(turn) / TWO_PI)))
