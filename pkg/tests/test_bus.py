from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from kjlint.bus import MAX_DEPTH, BusOverflow, Message, MessageBus


def test_subscribe_then_publish_delivers():
    bus, seen = MessageBus(), []
    sid = bus.subscribe("stage1.finding", seen.append, 10)
    msg = Message("stage1.finding", 1)
    report = bus.publish(msg)
    assert report.delivered_to == [sid] and seen == [msg]


def test_lower_priority_first():
    bus, order = MessageBus(), []
    five = bus.subscribe("k", lambda m: order.append(5), 5)
    one = bus.subscribe("k", lambda m: order.append(1), 1)
    assert bus.publish(Message("k")).delivered_to == [one, five]
    assert order == [1, 5]


def test_label_filter_skips():
    bus = MessageBus()
    sid = bus.subscribe("k", lambda m: None, label_filter={"kotlin"})
    report = bus.publish(Message("k", labels={"java"}))
    assert report.delivered_to == [] and report.skipped == [(sid, "label-mismatch")]
    assert bus.publish(Message("k", labels={"kotlin", "x"})).delivered_to == [sid]


def test_predicate_filter_skips():
    bus = MessageBus()
    sid = bus.subscribe("k", lambda m: None, predicate=lambda m: m.payload > 1)
    assert bus.publish(Message("k", 1)).skipped == [(sid, "predicate-mismatch")]
    assert bus.publish(Message("k", 2)).delivered_to == [sid]


def test_zero_subscribers():
    report = MessageBus().publish(Message("a"))
    assert report.delivered_to == [] and report.skipped == [] and report.failures == []


def test_other_kind_not_delivered():
    bus = MessageBus()
    bus.subscribe("b", lambda m: pytest.fail("wrong kind"))
    assert bus.publish(Message("a")).delivered_to == []


def test_reentrant_publish_is_depth_first():
    bus, order = MessageBus(), []

    def on_a(msg):
        order.append("a-start")
        bus.publish(Message("b"))
        order.append("a-end")

    bus.subscribe("a", on_a)
    bus.subscribe("b", lambda m: order.append("b"))
    bus.publish(Message("a"))
    assert order == ["a-start", "b", "a-end"]


def test_unsubscribe():
    bus = MessageBus()
    sid = bus.subscribe("k", lambda m: None)
    assert bus.unsubscribe(sid) is True
    assert bus.unsubscribe(sid) is False
    assert bus.publish(Message("k")).delivered_to == []


def test_unsubscribe_during_dispatch_applies_next_time():
    bus = MessageBus()
    later = []
    first = bus.subscribe("k", lambda m: bus.unsubscribe(second))
    second = bus.subscribe("k", later.append)
    assert bus.publish(Message("k")).delivered_to == [first, second]
    assert bus.publish(Message("k")).delivered_to == [first]


def test_subscribe_during_dispatch_applies_next_time():
    bus = MessageBus()
    added = []
    first = bus.subscribe("k", lambda m: added.append(bus.subscribe("k", lambda m: None)) if not added else None)
    assert bus.publish(Message("k")).delivered_to == [first]
    assert bus.publish(Message("k")).delivered_to == [first, added[0]]


def test_failure_is_captured():
    bus, seen = MessageBus(), []

    def boom(msg):
        raise RuntimeError("boom")

    bad = bus.subscribe("k", boom, 0)
    good = bus.subscribe("k", seen.append, 1)
    report = bus.publish(Message("k"))
    assert report.delivered_to == [bad, good] and len(seen) == 1
    assert report.failures == [(bad, "RuntimeError: boom")]


def test_overflow():
    bus = MessageBus()
    depth = []

    def recurse(msg):
        depth.append(msg.payload)
        bus.publish(Message("k", msg.payload + 1))

    bus.subscribe("k", recurse)
    with pytest.raises(BusOverflow):
        bus.publish(Message("k", 1))
    assert max(depth) == MAX_DEPTH
    # The bus is usable again afterwards.
    seen = []
    bus.subscribe("other", seen.append)
    bus.publish(Message("other"))
    assert len(seen) == 1


@pytest.mark.parametrize("kind", ["", None])
def test_empty_kind_rejected(kind):
    with pytest.raises(ValueError):
        Message(kind)
    with pytest.raises(ValueError):
        MessageBus().subscribe(kind, lambda m: None)


subscriber_sets = st.lists(
    st.tuples(st.integers(-5, 5), st.booleans(), st.sampled_from([None, frozenset(), frozenset({"x"})])),
    min_size=0, max_size=20)


@settings(max_examples=500, deadline=None)
@given(subscriber_sets)
def test_delivery_order_and_isolation(subs):
    """Delivery follows (priority, registration index); a raising handler never blocks later ones."""
    bus, ran = MessageBus(), []
    ids = []
    for position, (priority, fails, labels) in enumerate(subs):
        def handler(msg, position=position, fails=fails):
            ran.append(position)
            if fails:
                raise ValueError(position)
        ids.append(bus.subscribe("k", handler, priority, label_filter=labels))
    report = bus.publish(Message("k", labels={"x"}))
    expected = sorted(range(len(subs)), key=lambda i: (subs[i][0], i))
    assert report.delivered_to == [ids[i] for i in expected]
    assert ran == expected
    assert [sid for sid, _ in report.failures] == [ids[i] for i in expected if subs[i][1]]
