"""Reference curves with independently known Weil coefficients.

Field elements are written as little-endian tuples in the generator alpha of
F_q = F_p[alpha]/(field_poly).
"""

from __future__ import annotations

from dataclasses import dataclass

from .cohomology import Curve


@dataclass(frozen=True)
class ReferenceCurve:
    name: str
    curve: Curve
    weil_a: tuple[int, ...]
    known_bad: tuple[int, ...] = ()  # indices (1-based) whose recorded value is unreliable


def _curve(p, field_poly, r, terms, d):
    n = len(field_poly) - 1
    coeffs = [terms.get(i, (0,) * n) for i in range(d + 1)]
    return Curve(p, n, tuple(field_poly), r, tuple(coeffs))


def _ab(a, b):
    """a*alpha + b."""
    return (b, a)


GENUS13_F49 = ReferenceCurve(
    "C_{3,15} over F_49",
    _curve(
        7,
        (4, -1, 1),
        3,
        {
            15: (1, 0), 13: _ab(2, 5), 12: _ab(2, 0), 11: _ab(1, 0), 10: _ab(3, 6), 9: (3, 0),
            8: _ab(2, 4), 7: _ab(4, 0), 6: _ab(6, 0), 4: (6, 0), 3: _ab(1, 0), 2: _ab(4, 5), 1: _ab(6, 5),
        },
        15,
    ),
    (4, -88, -317, 3477, 45743, -38408, -3064081, 1826186, 105964107, 178170657,
     -3878128722, -10860792624, 227741125446),
)

GENUS26_F121 = ReferenceCurve(
    "C_{5,15} over F_121",
    _curve(
        11,
        (4, -1, 1),
        5,
        {
            15: (1, 0), 13: _ab(4, 7), 12: _ab(4, 6), 11: _ab(2, 4), 10: _ab(10, 4), 9: _ab(1, 10),
            8: (4, 0), 7: (2, 0), 6: (6, 0), 5: _ab(3, 1), 4: (10, 0), 3: _ab(10, 1), 2: _ab(5, 9),
            1: _ab(7, 4), 0: _ab(2, 6),
        },
        15,
    ),
    (36, 418, 3928, 107603, 1546802, 10195080, 189193348, 3908194517, 35529836037,
     323855056565, 6026279205222, 71054667707163, 577639402235514, 7788857330417489,
     103362684561282136, 988282517113615745, 11354454883387292669, 122508522344304060111,
     999211815604433952646, 13694995222065645049886, 174130364097714846506217,
     1066845743104788110404502, 11897270459284483568657805, 243759226939902383459526275,
     1925128879480201238759308035, 8130284653021215396447907725),
)

GENUS45_F23 = ReferenceCurve(
    "C_{11,11} over F_23",
    _curve(
        23,
        (0, 1),
        11,
        {11: (1,), 9: (21,), 8: (22,), 7: (12,), 6: (14,), 4: (5,), 3: (15,), 2: (6,), 1: (15,), 0: (11,)},
        11,
    ),
    (-10, 148, -1172, 11400, -75082, 583607, -3423792, 23458758, -127681770, 815749654,
     -4274768142, 26177112830, -133290333147, 792181088309, -3931625501060, 22819266210165,
     -110481821962459, 633740960651940, -3001343844798677, 17054767132345719,
     -79052006236498542, 445634829426753123, -2018975937263556165,
     243759226939902383459526275, -50378603603766216893, 281146158641010525301,
     -1239849286459249269112, 6921368868854435563991, -30287237899941389111850,
     168719424687252264076767, -728584303024763825003860, 4051750456875540838493246,
     -17207665565047921783353414, 95531537944645720980803334, -398515032624667404187154280,
     2220486855862732905431832556, -9115467662197167357206988372,
     50987572400077029250253058483, -207263506930883933858403922280,
     1165874930218286023405099204275, -4712376446054941126784485443520,
     26631761506101496258816899274283, -107766534346210234686112282045945,
     610647567000069960495606605432680, -2472407143793335018389394336486111),
    known_bad=(24,),
)

REFERENCE_CURVES = {c.name: c for c in (GENUS13_F49, GENUS26_F121, GENUS45_F23)}


def _alpha_powers(p, field_poly, exps):
    from . import gfp

    out = {}
    for deg, k in exps.items():
        v = gfp.powmod([0, 1], k, list(field_poly), p)
        out[deg] = tuple(v + [0] * (len(field_poly) - 1 - len(v)))
    return out


_G57_FIELD = (2, 12, 1)
_G57_TERMS = _alpha_powers(
    13,
    _G57_FIELD,
    {19: 166, 18: 12, 17: 64, 16: 102, 15: 166, 13: 25, 11: 68, 10: 117, 9: 8, 8: 15, 7: 16,
     6: 127, 5: 90, 4: 43, 3: 128, 2: 40, 1: 125, 0: 99},
)
_G57_TERMS.update({21: (1, 0), 14: (12, 0)})

# The full Weil polynomial is (T + 13)^6 * Q(T)^2 with Q of genus 27; weil_a lists Q's coefficients.
GENUS57_F169 = ReferenceCurve(
    "C_{7,21} over F_169",
    _curve(13, _G57_FIELD, 7, _G57_TERMS, 21),
    (14, 224, 3804, 68075, 650370, 8859458, 72307214, 1083567163, -157139189, -20620569697,
     -2357957261121, -16670241272334, -448263291116144, -145927900246555, -23388115214168173,
     647629219619169060, 6886478186860664665, 328920785102728658021, 2370798532171844617115,
     52751582248734601974196, 326749252127936392530802, 5641762316975885681964474,
     -35674382266353914319048358, -321587628360190547802537740, -19029290083673947265278225863,
     -152084904894251081055443498722, -3983383747839588680645320044353),
)
GENUS57_LINEAR_FACTOR = ((13, 1), 6)  # (T + 13)^6, ascending coefficients

REFERENCE_CURVES[GENUS57_F169.name] = GENUS57_F169
