//! Small enumeration helpers shared by the kernels.

/// Odometer over all length-`len` index tuples with entries below `radix`,
/// in ascending big-endian order. Repetition is allowed; this is the row
/// selector used by composition, images and satisfaction checks.
pub(crate) struct IndexTuples {
    slots: Vec<usize>,
    radix: usize,
    started: bool,
    exhausted: bool,
}

impl IndexTuples {
    pub(crate) fn new(len: usize, radix: usize) -> Self {
        IndexTuples {
            slots: vec![0; len],
            radix,
            started: false,
            exhausted: radix == 0 && len > 0,
        }
    }

    pub(crate) fn next(&mut self) -> Option<&[usize]> {
        if self.exhausted {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.slots);
        }
        for i in (0..self.slots.len()).rev() {
            self.slots[i] += 1;
            if self.slots[i] < self.radix {
                return Some(&self.slots);
            }
            self.slots[i] = 0;
        }
        self.exhausted = true;
        None
    }
}
