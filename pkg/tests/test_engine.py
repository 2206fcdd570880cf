import pytest

from cliquemul.engine import CliqueEngine, RoundLedger, SimulationError, run_protocol


def test_all_to_all_single_word_is_one_round():
    eng = CliqueEngine(8)
    rounds = eng.run_phase(
        "x", lambda v, st, box: [(u, 0, v, 0, 0) for u in range(8) if u != v])
    assert rounds == 1
    rec = eng.ledger.records[-1]
    assert rec.max_send == 7 and rec.max_recv == 7 and rec.total_msgs == 56


def test_hot_sender_charges_ceiling():
    n = 8
    eng = CliqueEngine(n)
    # node 0 sends 3(n-1) words, spread so receive load stays at 3
    msgs = [(u, 0, i, 0, 0) for i in range(3) for u in range(1, n)]
    rounds = eng.run_phase("x", lambda v, st, box: msgs if v == 0 else [])
    assert rounds == 3


def test_empty_phase_is_free():
    eng = CliqueEngine(4)
    assert eng.run_phase("quiet", lambda v, st, box: []) == 0
    assert eng.ledger.records[-1].rounds == 0


def test_self_messages_are_free_and_delivered():
    eng = CliqueEngine(4)
    rounds = eng.run_phase("self", lambda v, st, box: [(v, 9, v, 0, 42)])
    assert rounds == 0
    assert all(box == [(v, 9, v, 0, 42)] for v, box in enumerate(eng.inboxes))


def test_broadcast_waves():
    eng = CliqueEngine(5)
    assert eng.run_broadcast("w1", lambda v, st: (0, v, 0, 0)) == 1
    assert all(len(box) == 4 for box in eng.inboxes)
    assert eng.run_broadcast("w2", lambda v, st: (0, v, 0, 0)) == 1
    assert eng.ledger.total_rounds() == 2


def test_echo_protocol():
    n = 6
    states, ledger = run_protocol(
        n, [{} for _ in range(n)],
        [("echo", lambda v, st, box: [(0, 1, v, 0, 0)] if v != 0 else [])])
    assert ledger.total_rounds() == 1


def test_mailbox_order_is_sender_then_emission():
    eng = CliqueEngine(4)
    eng.run_phase("seed", lambda v, st, box:
                  [(3, 0, v, k, 0) for k in range(2)] if v in (2, 1) else [])
    assert [(w[0], w[3]) for w in eng.inboxes[3]] == [(1, 0), (1, 1), (2, 0), (2, 1)]


def test_bad_destination_raises():
    eng = CliqueEngine(3)
    with pytest.raises(SimulationError):
        eng.run_phase("bad", lambda v, st, box: [(7, 0, 0, 0, 0)])


def test_ledger_csv_and_prefixes():
    eng = CliqueEngine(4)
    eng.run_phase("a.one", lambda v, st, box: [((v + 1) % 4, 0, 0, 0, 0)])
    eng.run_phase("a.two", lambda v, st, box: [])
    eng.run_phase("b.one", lambda v, st, box: [((v + 1) % 4, 0, 0, 0, 0)])
    csv = eng.ledger.to_csv()
    assert csv.splitlines()[0] == "phase,rounds,max_send,max_recv,total_msgs"
    assert len(csv.splitlines()) == 4
    assert eng.ledger.total_rounds("a.") == 1
    assert [r.label for r in eng.ledger.records_for("b.")] == ["b.one"]
    assert eng.ledger.total_rounds() == 2


def test_routing_constant_scales_charge():
    for c in (1, 2, 3):
        eng = CliqueEngine(4, lenzen_constant=c)
        eng.run_phase("x", lambda v, st, box:
                      [(u, 0, 0, 0, 0) for u in range(4) if u != v])
        assert eng.ledger.records[-1].rounds == c
    with pytest.raises(ValueError):
        RoundLedger(0)


def test_determinism_of_ledger():
    def run():
        eng = CliqueEngine(6)
        for k in range(3):
            eng.run_phase(f"p{k}", lambda v, st, box:
                          [((v + k + 1) % 6, k, v, 0, 0)])
        return eng.ledger.to_csv()

    assert run() == run() == run()


def test_single_node_clique():
    eng = CliqueEngine(1)
    assert eng.run_phase("solo", lambda v, st, box: [(0, 0, 0, 0, 0)]) == 0
    assert eng.inboxes[0] == [(0, 0, 0, 0, 0)]
