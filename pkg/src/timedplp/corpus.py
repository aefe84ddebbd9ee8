"""Built-in benchmark programs and query builders.

Three program families: a three-state Markov chain, a two-state weather
model observed through accumulated precipitation, and iterated draws from
an urn without replacement.  The weather model also comes in a narrow
variant with the same structure but small observation supports, sized so
the exhaustive oracle can cross-check it.
"""

from __future__ import annotations

MARKOV = """\
in ~ [a, b, c] @ 0.
in ~ [[a, 0.9], [b, 0.05], [c, 0.05]] @ T+1 :- in=a @ T.
in ~ [[a, 0.7], [c, 0.3]] @ T+1 :- in=b @ T.
in ~ [[a, 0.8], [c, 0.2]] @ T+1 :- in=c @ T.
"""

HMM = """\
state ~ [[rainy, 0.6], [sunny, 0.4]] @ 0.
obs ~ [3..30] @ 0 :- state=rainy @ 0.
obs ~ [0..5] @ 0 :- state=sunny @ 0.
state ~ [[rainy, 0.7], [sunny, 0.3]] @ T+1 :- state=rainy @ T.
state ~ [[rainy, 0.4], [sunny, 0.6]] @ T+1 :- state=sunny @ T.
obs ~ [R+3..R+30] @ T :- state=rainy @ T, T > 0, obs=R @ T-1.
obs ~ [R..R+5] @ T :- state=sunny @ T, T > 0, obs=R @ T-1.
"""

HMM_NARROW = """\
state ~ [[rainy, 0.6], [sunny, 0.4]] @ 0.
obs ~ [2..8] @ 0 :- state=rainy @ 0.
obs ~ [0..3] @ 0 :- state=sunny @ 0.
state ~ [[rainy, 0.7], [sunny, 0.3]] @ T+1 :- state=rainy @ T.
state ~ [[rainy, 0.4], [sunny, 0.6]] @ T+1 :- state=sunny @ T.
obs ~ [R+2..R+8] @ T :- state=rainy @ T, T > 0, obs=R @ T-1.
obs ~ [R..R+3] @ T :- state=sunny @ T, T > 0, obs=R @ T-1.
"""

URN = """\
urn([r(1), r(2), g(1)]) @ 0.
draw ~ Balls @ T :- urn(Balls) @ T, Balls \\= [].
urn(Balls -- [B]) @ T+1 :- urn(Balls) @ T, draw = B @ T.
some(red) @ T :- draw=r(_) @ T.
some(green) @ T :- draw=g(_) @ T.
"""

PROGRAMS = {
    "markov": MARKOV,
    "hmm": HMM,
    "hmm-narrow": HMM_NARROW,
    "urn": URN,
}


def markov_query(kind: str, n: int) -> str:
    """Markov-chain queries scaled by n.

    timesteps: stay at location a for n+1 consecutive time points;
    specificity: nine fixed time points with the last n locations left
    open; timepoint: location a at time n only.
    """
    if kind == "timesteps":
        return "?- " + ", ".join(f"in=a @ {t}" for t in range(n + 1)) + "."
    if kind == "specificity":
        last = 8
        if not 0 <= n <= last:
            raise ValueError("specificity size must be within 0..8")
        parts = [f"in=a @ {t}" for t in range(last + 1 - n)]
        parts += [f"in=L{t} @ {t}" for t in range(last + 1 - n, last + 1)]
        return "?- " + ", ".join(parts) + "."
    if kind == "timepoint":
        return f"?- in=a @ {n}."
    raise ValueError(f"unknown markov query kind {kind!r}")


def hmm_observations(scenario: str, n: int, *, narrow: bool = False) -> list:
    """Observed bowl levels at times 1..n for a weather scenario.

    Increments are chosen so that "rainy" stays compatible with either
    state, "sunny" pins the sunny observation range, and "mixed"
    alternates between a both-states increment and a rain-only one.
    """
    if scenario == "sunny":
        return [0] * n
    if scenario == "rainy":
        step = 2 if narrow else 4
        return [step * t for t in range(1, n + 1)]
    if scenario == "mixed":
        small, big = (2, 6) if narrow else (4, 20)
        out, level = [], 0
        for t in range(1, n + 1):
            level += small if t % 2 == 1 else big
            out.append(level)
        return out
    raise ValueError(f"unknown weather scenario {scenario!r}")


def hmm_query(scenario: str, n: int, drop_times=(), *,
              narrow: bool = False) -> str:
    """Filtering query: current state at time n given observations at
    times 1..n, optionally with some observation times left out."""
    obs = hmm_observations(scenario, n, narrow=narrow)
    ev = [f"obs={v} @ {t}" for t, v in enumerate(obs, start=1)
          if t not in set(drop_times)]
    return f"?- state=X @ {n} | " + ", ".join(ev) + "."


def urn_query(n: int) -> str:
    """Colors seen at draws 1..n given that the first draw was red."""
    body = ", ".join(f"some(C{t}) @ {t}" for t in range(1, n + 1))
    return f"?- {body} | some(red) @ 0."
