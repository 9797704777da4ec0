"""Fixed-capacity pool of reusable genome buffers.

The pool owns every tree buffer an engine run will ever touch. Capacity is
popsize + 2 * max(1, nthreads): one buffer per population member plus up to
two parents held by each in-flight crossover. Free slots are kept on a
singly linked index chain so acquire/release are O(1) and buffer storage,
once allocated, is reused for the rest of the run.

Slot index 0 is reserved as the "no buffer" sentinel; real slots are
1..capacity. The pool is not thread-safe on its own: callers mutate it only
inside the engine's single lock.
"""

from __future__ import annotations

NO_SLOT = 0  # sentinel slot id meaning "holds no buffer"


class PoolExhaustedError(RuntimeError):
    """Raised when no free buffer exists.

    Under correct class-priority scheduling this is unreachable; hitting it
    means the breeding bookkeeping is broken, so it is fatal rather than
    retryable.
    """


class BufferPool:
    """Lazily allocated genome buffers linked through a free chain."""

    def __init__(self, popsize: int, nthreads: int, buffer_bytes: int):
        if popsize < 1:
            raise ValueError(f"popsize must be >= 1, got {popsize}")
        if buffer_bytes < 1:
            raise ValueError(f"buffer_bytes must be >= 1, got {buffer_bytes}")
        if nthreads < 0:
            raise ValueError(f"nthreads must be >= 0, got {nthreads}")
        self.capacity = popsize + 2 * max(1, nthreads)
        self.buffer_bytes = buffer_bytes
        # index 0 unused in both arrays so slot ids start at 1
        self.slots: list[bytearray | None] = [None] * (self.capacity + 1)
        self.chain = [0] * (self.capacity + 1)
        for i in range(1, self.capacity):
            self.chain[i] = i + 1
        self.chain[self.capacity] = 0  # end of chain
        self.chainhead = 1
        self.used = 0
        self.max_used = 0
        self.allocated = 0

    def acquire(self, who) -> int:
        """Hand the next free slot to `who`, allocating its storage on first use.

        `who` is any object with a `slot_id` attribute (an Individual). The
        slot id is recorded there so release needs no search.
        """
        head = self.chainhead
        if head <= 0:
            raise PoolExhaustedError(
                f"ran out of genome buffers (capacity {self.capacity}, "
                f"used {self.used}): breeding schedule invariant broken"
            )
        if self.slots[head] is None:
            self.slots[head] = bytearray(self.buffer_bytes)
            self.allocated += 1
        who.slot_id = head
        self.chainhead = self.chain[head]
        assert self.chainhead == 0 or 1 <= self.chainhead <= self.capacity
        self.used += 1
        if self.used > self.max_used:
            self.max_used = self.used
        return head

    def release(self, who) -> None:
        """Push `who`'s slot back on the free chain. Safe to call twice."""
        slot = who.slot_id
        if slot == NO_SLOT:
            return  # already freed
        assert 1 <= slot <= self.capacity
        assert self.slots[slot] is not None
        self.chain[slot] = self.chainhead
        self.chainhead = slot
        self.used -= 1
        assert self.used >= 0
        who.slot_id = NO_SLOT

    def buffer(self, slot: int) -> bytearray:
        """Backing storage of an allocated slot."""
        buf = self.slots[slot]
        assert buf is not None, f"slot {slot} has no storage"
        return buf

    def usage_stats(self) -> tuple[int, int, int]:
        """(live now, run high-water mark, slots ever allocated)."""
        return self.used, self.max_used, self.allocated

    def free_chain(self) -> list[int]:
        """Slots reachable from the chain head, in chain order (for checks)."""
        out = []
        seen = set()
        i = self.chainhead
        while i != 0:
            if i in seen or not 1 <= i <= self.capacity:
                raise AssertionError(f"corrupt free chain at slot {i}")
            seen.add(i)
            out.append(i)
            i = self.chain[i]
        return out
