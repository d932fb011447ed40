//! The top-L global-best archive and its roulette-wheel selection.

use super::config::ArchiveRule;
use super::EngineError;

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    pub position: Vec<f64>,
    pub fitness: f64,
}

/// Up to `capacity` positions ordered by fitness, best first. Entries are
/// owned snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct GBestArchive {
    capacity: usize,
    rule: ArchiveRule,
    entries: Vec<ArchiveEntry>,
}

impl GBestArchive {
    pub fn new(capacity: usize, rule: ArchiveRule) -> Self {
        assert!(capacity >= 1, "archive capacity must be at least 1");
        GBestArchive {
            capacity,
            rule,
            entries: Vec::with_capacity(capacity),
        }
    }

    /// Seeds with the best `capacity` candidates of distinct fitness. Ties
    /// keep the earlier candidate.
    pub fn seeded<'a>(
        capacity: usize,
        rule: ArchiveRule,
        candidates: impl IntoIterator<Item = (&'a [f64], f64)>,
    ) -> Self {
        let mut all: Vec<(usize, &[f64], f64)> =
            candidates.into_iter().enumerate().map(|(i, (p, f))| (i, p, f)).collect();
        all.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
        let mut archive = GBestArchive::new(capacity, rule);
        for (_, position, fitness) in all {
            if archive.entries.len() == capacity {
                break;
            }
            if archive.entries.last().is_some_and(|e| e.fitness == fitness) {
                continue;
            }
            archive.entries.push(ArchiveEntry {
                position: position.to_vec(),
                fitness,
            });
        }
        archive.debug_check();
        archive
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn head(&self) -> Option<&ArchiveEntry> {
        self.entries.first()
    }

    pub fn fitness(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.fitness).collect()
    }

    /// Offers a candidate; returns whether the archive changed.
    ///
    /// With [`ArchiveRule::Replace`], a candidate better than the head
    /// overwrites the head, and one strictly between ranks `j-1` and `j`
    /// overwrites rank `j`. While the archive is not yet full, candidates
    /// better than the tail are added instead.
    pub fn offer(&mut self, position: &[f64], fitness: f64) -> bool {
        let changed = if self.entries.len() < self.capacity {
            self.offer_warmup(position, fitness)
        } else {
            match self.rule {
                ArchiveRule::Replace => self.offer_replace(position, fitness),
                ArchiveRule::InsertShift => self.offer_insert(position, fitness),
            }
        };
        self.debug_check();
        changed
    }

    fn offer_warmup(&mut self, position: &[f64], fitness: f64) -> bool {
        let accept = match self.entries.last() {
            None => true,
            Some(tail) => fitness > tail.fitness && self.entries.iter().all(|e| e.fitness != fitness),
        };
        if accept {
            self.entries.push(ArchiveEntry {
                position: position.to_vec(),
                fitness,
            });
            self.entries.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
        }
        accept
    }

    fn slot_for(&self, fitness: f64) -> Option<usize> {
        if fitness > self.entries[0].fitness {
            return Some(0);
        }
        (1..self.entries.len()).find(|&j| self.entries[j - 1].fitness > fitness && fitness > self.entries[j].fitness)
    }

    fn offer_replace(&mut self, position: &[f64], fitness: f64) -> bool {
        match self.slot_for(fitness) {
            Some(j) => {
                let e = &mut self.entries[j];
                e.position.clear();
                e.position.extend_from_slice(position);
                e.fitness = fitness;
                true
            }
            None => false,
        }
    }

    fn offer_insert(&mut self, position: &[f64], fitness: f64) -> bool {
        match self.slot_for(fitness) {
            Some(j) => {
                self.entries.insert(
                    j,
                    ArchiveEntry {
                        position: position.to_vec(),
                        fitness,
                    },
                );
                self.entries.truncate(self.capacity);
                true
            }
            None => false,
        }
    }

    /// Roulette probabilities `g_i / sum(g)`.
    pub fn selection_probabilities(&self) -> Result<Vec<f64>, EngineError> {
        if self.entries.is_empty() {
            return Err(EngineError::EmptyArchive);
        }
        let total: f64 = self.entries.iter().map(|e| e.fitness).sum();
        Ok(self.entries.iter().map(|e| e.fitness / total).collect())
    }

    /// Index of the entry whose cumulative-probability interval holds `xi`.
    pub fn select_index(&self, xi: f64) -> Result<usize, EngineError> {
        let probs = self.selection_probabilities()?;
        let mut cumulative = 0.0;
        for (k, p) in probs.iter().enumerate() {
            cumulative += p;
            if xi < cumulative {
                return Ok(k);
            }
        }
        Ok(probs.len() - 1)
    }

    pub fn sample_gbest(&self, xi: f64) -> Result<&[f64], EngineError> {
        let k = self.select_index(xi)?;
        Ok(&self.entries[k].position)
    }

    fn debug_check(&self) {
        debug_assert!(self.entries.len() <= self.capacity);
        debug_assert!(
            self.entries.windows(2).all(|w| w[0].fitness >= w[1].fitness),
            "archive out of order: {:?}",
            self.fitness()
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn archive(fitness: &[f64]) -> GBestArchive {
        let positions: Vec<Vec<f64>> = fitness.iter().map(|&f| vec![f]).collect();
        GBestArchive::seeded(
            fitness.len(),
            ArchiveRule::Replace,
            positions.iter().map(|p| p.as_slice()).zip(fitness.iter().copied()),
        )
    }

    #[test]
    fn probabilities_follow_fitness_share() {
        let a = archive(&[4.0, 3.0, 2.0, 1.0]);
        let p = a.selection_probabilities().unwrap();
        for (got, want) in p.iter().zip([0.4, 0.3, 0.2, 0.1]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(archive(&[0.7]).selection_probabilities().unwrap(), vec![1.0]);
        let empty = GBestArchive::new(3, ArchiveRule::Replace);
        assert_eq!(empty.selection_probabilities(), Err(EngineError::EmptyArchive));
        assert_eq!(empty.sample_gbest(0.1), Err(EngineError::EmptyArchive));
    }

    #[test]
    fn sampling_boundaries() {
        let a = archive(&[4.0, 3.0, 2.0, 1.0]);
        assert_eq!(a.select_index(0.0).unwrap(), 0);
        assert_eq!(a.select_index(0.45).unwrap(), 1);
        assert_eq!(a.select_index(0.75).unwrap(), 2);
        assert_eq!(a.select_index(0.95).unwrap(), 3);
        assert_eq!(a.select_index(1.0).unwrap(), 3);
        assert_eq!(a.sample_gbest(0.45).unwrap(), &[3.0]);
        let single = archive(&[0.2]);
        for xi in [0.0, 0.3, 0.999, 1.0] {
            assert_eq!(single.select_index(xi).unwrap(), 0);
        }
    }

    #[test]
    fn replace_rule() {
        let mut a = archive(&[5.0, 3.0]);
        assert!(a.offer(&[6.0], 6.0));
        assert_eq!(a.fitness(), vec![6.0, 3.0]);

        let mut a = archive(&[5.0, 3.0]);
        assert!(a.offer(&[4.0], 4.0));
        assert_eq!(a.fitness(), vec![5.0, 4.0]);

        let mut a = archive(&[5.0, 3.0]);
        assert!(!a.offer(&[2.0], 2.0));
        assert!(!a.offer(&[3.0], 3.0));
        assert_eq!(a.fitness(), vec![5.0, 3.0]);
    }

    #[test]
    fn insert_shift_rule() {
        let mut a = GBestArchive::seeded(2, ArchiveRule::InsertShift, [(&[5.0][..], 5.0), (&[3.0][..], 3.0)]);
        assert!(a.offer(&[6.0], 6.0));
        assert_eq!(a.fitness(), vec![6.0, 5.0]);
    }

    #[test]
    fn warmup_appends_better_than_tail() {
        let mut a = GBestArchive::new(3, ArchiveRule::Replace);
        assert!(a.offer(&[1.0], 1.0));
        assert!(a.offer(&[3.0], 3.0));
        assert!(!a.offer(&[0.5], 0.5));
        assert!(!a.offer(&[3.0], 3.0));
        assert!(a.offer(&[2.0], 2.0));
        assert_eq!(a.fitness(), vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn seeding_skips_duplicate_fitness() {
        let a = GBestArchive::seeded(
            3,
            ArchiveRule::Replace,
            [(&[0.0][..], 2.0), (&[1.0][..], 5.0), (&[2.0][..], 5.0), (&[3.0][..], 1.0)],
        );
        assert_eq!(a.fitness(), vec![5.0, 2.0, 1.0]);
        assert_eq!(a.head().unwrap().position, vec![1.0]);
    }

    #[test]
    fn entries_are_snapshots() {
        let mut pos = vec![1.0, 2.0];
        let mut a = GBestArchive::new(2, ArchiveRule::Replace);
        a.offer(&pos, 0.5);
        pos[0] = 99.0;
        assert_eq!(a.head().unwrap().position, vec![1.0, 2.0]);
    }
}
