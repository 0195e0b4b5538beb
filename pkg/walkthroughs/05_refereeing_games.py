"""
Refereeing a game
=================

Transcripts are checked round by round against eleven named rules; legal
plays on finite posets are then scored for a winning condition.
"""

from silverchase.game import (
    BoundedSilver,
    FinitePoset,
    GameTranscript,
    NiceSet,
    Round,
    predense_above,
    splitting_play,
    validate_transcript,
)
from silverchase.formats import verdict_to_text

# 0 sits below 1 and 2, and those two are incompatible
vee = FinitePoset([[1, 1, 1], [0, 1, 0], [0, 0, 1]])
print(predense_above(vee, 0, [1]), predense_above(vee, 0, [1, 2]))

# round 0 splits (0 is in K), round 1 does not
rounds = (
    Round(frozenset({(), (0,), (1,)}), ((1,), (0,)), ((2, 2), (1, 1))),
    Round(frozenset({(), (0,), (1,), (0, 2), (1, 2)}), ((0, 2), (1, 2)), ((1, 1), (2, 2))),
)
play = GameTranscript(2, NiceSet.finite([0]), 0, rounds)
print(verdict_to_text(validate_transcript(vee, play)))

# the same answers after a single branch: the second answer is not above the first
bad = GameTranscript(2, NiceSet.silver(), 0, (
    Round(frozenset({(), (2,)}), ((2,),), ((1, 1),)),
    Round(frozenset({(), (2,), (2, 2)}), ((2, 2),), ((2, 2),)),
))
print(verdict_to_text(validate_transcript(vee, bad)))

# scripted splitting play on Silver conditions; the win needs a claimed witness
t = splitting_play(2, 7, seed=1)
v = validate_transcript(BoundedSilver(2), t)
print(v.overall, v.win.kind)
claimed = GameTranscript(t.n, t.K, t.root, t.rounds, t.rounds[-1].moves[0][1])
print(validate_transcript(BoundedSilver(2), claimed).win)
