use chrono::NaiveDate;

use super::{CitationIndex, PubIdx, PublicationRecord, SourceRecord};

/// Frozen view of the index as it stood at the end of `cutoff`.
///
/// A publication is visible when `load_date <= cutoff`; a link is visible
/// only when both of its endpoints are.
#[derive(Debug, Clone)]
pub struct IndexSnapshot<'a> {
    index: &'a CitationIndex,
    cutoff: NaiveDate,
    visible: Vec<bool>,
    publications: Vec<PubIdx>,
    links: Vec<(PubIdx, PubIdx)>,
}

/// Element-wise comparison of the visible records.
impl PartialEq for IndexSnapshot<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.cutoff == other.cutoff
            && self.publications().eq(other.publications())
            && self.links().eq(other.links())
            && self.sources() == other.sources()
    }
}

impl Eq for IndexSnapshot<'_> {}

impl<'a> IndexSnapshot<'a> {
    pub(crate) fn new(index: &'a CitationIndex, cutoff: NaiveDate) -> Self {
        let visible: Vec<bool> =
            index.publications().iter().map(|p| p.load_date <= cutoff).collect();
        let publications = (0..visible.len() as u32)
            .map(PubIdx)
            .filter(|p| visible[p.get()])
            .collect();
        let links = index
            .raw_links()
            .iter()
            .copied()
            .filter(|(a, b)| visible[a.get()] && visible[b.get()])
            .collect();
        IndexSnapshot { index, cutoff, visible, publications, links }
    }

    pub fn cutoff(&self) -> NaiveDate {
        self.cutoff
    }

    pub fn index(&self) -> &'a CitationIndex {
        self.index
    }

    /// Every source, regardless of cutoff; sources carry no load date.
    pub fn sources(&self) -> &'a [SourceRecord] {
        self.index.sources()
    }

    pub fn publications(&self) -> impl Iterator<Item = &'a PublicationRecord> + '_ {
        self.publications.iter().map(|&p| self.index.publication(p))
    }

    pub fn publication_count(&self) -> usize {
        self.publications.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> impl Iterator<Item = (&'a PublicationRecord, &'a PublicationRecord)> + '_ {
        self.links
            .iter()
            .map(|&(a, b)| (self.index.publication(a), self.index.publication(b)))
    }

    pub fn is_visible(&self, idx: PubIdx) -> bool {
        self.visible[idx.get()]
    }

    pub(crate) fn visible_publications(&self) -> &[PubIdx] {
        &self.publications
    }

    pub(crate) fn visible_links(&self) -> &[(PubIdx, PubIdx)] {
        &self.links
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{link, publication, source};
    use super::*;
    use crate::index::CitationLink;
    use chrono::Days;

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    #[test]
    fn cutoff_is_inclusive() {
        let idx = CitationIndex::from_records(
            [source(1, None)],
            [
                publication("on", 1, 2016, "2017-05-31"),
                publication("after", 1, 2016, "2017-06-01"),
            ],
            [],
        )
        .unwrap();
        let snap = idx.snapshot(date("2017-05-31"));
        let ids: Vec<_> = snap.publications().map(|p| p.pub_id.0.as_str()).collect();
        assert_eq!(ids, ["on"]);
        assert_eq!(snap.sources().len(), 1);
    }

    #[test]
    fn annual_cutoffs_give_different_views() {
        let idx = CitationIndex::from_records(
            [source(1, None)],
            [
                publication("a", 1, 2016, "2017-05-31"),
                publication("b", 1, 2017, "2018-04-30"),
                publication("c", 1, 2017, "2018-05-15"),
            ],
            [],
        )
        .unwrap();
        let s2016 = idx.snapshot(date("2017-05-31"));
        let s2017 = idx.snapshot(date("2018-04-30"));
        assert_eq!(s2016.publication_count(), 1);
        assert_eq!(s2017.publication_count(), 2);
        assert_ne!(s2016, s2017);
    }

    #[test]
    fn late_endpoints_drop_links() {
        // 100 publications, 40 of which load after the cutoff; brute-force the
        // expected view straight from the record list.
        let cutoff = date("2017-05-31");
        let pubs: Vec<PublicationRecord> = (0..100)
            .map(|i| {
                let load = if i % 5 < 2 { cutoff + Days::new(1 + i as u64) } else { cutoff - Days::new(i as u64) };
                let mut p = publication(&format!("p{i}"), 1, 2015, "2000-01-01");
                p.load_date = load;
                p
            })
            .collect();
        let links: Vec<CitationLink> = [(2, 3), (4, 5), (0, 2), (3, 1), (7, 8)]
            .iter()
            .map(|(a, b)| link(&format!("p{a}"), &format!("p{b}")))
            .collect();
        let idx = CitationIndex::from_records([source(1, None)], pubs.clone(), links.clone()).unwrap();
        let snap = idx.snapshot(cutoff);

        let expect_pubs: Vec<&PublicationRecord> = pubs.iter().filter(|p| p.load_date <= cutoff).collect();
        assert_eq!(expect_pubs.len(), 60);
        assert_eq!(snap.publications().collect::<Vec<_>>(), expect_pubs);

        let early = |id: &str| pubs.iter().any(|p| p.pub_id.0 == id && p.load_date <= cutoff);
        let expect_links: Vec<_> = links
            .iter()
            .filter(|l| early(&l.citing_pub_id.0) && early(&l.cited_pub_id.0))
            .collect();
        let got: Vec<_> = snap
            .links()
            .map(|(a, b)| link(&a.pub_id.0, &b.pub_id.0))
            .collect();
        assert_eq!(got.iter().collect::<Vec<_>>(), expect_links);
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn empty_snapshot_is_legal() {
        let idx = CitationIndex::from_records([source(1, None)], [], []).unwrap();
        let snap = idx.snapshot(date("1900-01-01"));
        assert_eq!(snap.publication_count(), 0);
        assert_eq!(snap.link_count(), 0);
    }
}
