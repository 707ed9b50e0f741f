use super::{head_word, ConceptGraph, OntologyError};
use crate::keywords::Extractor;
use crate::registry::Snapshot;

/// Learns the concept graph from every service description in the snapshot.
///
/// Each verb and noun-phrase occurrence becomes a concept linked to the
/// service and counted once. Noun phrases are domain concepts, and every
/// multiword phrase gets an is-a edge to its head noun.
pub fn build_service_ontology(reg: &Snapshot, extractor: &Extractor) -> Result<ConceptGraph, OntologyError> {
    if reg.is_empty() {
        return Err(OntologyError::EmptyRegistry);
    }
    let mut g = ConceptGraph::new();
    for record in reg.records() {
        let occ = extractor.occurrences(&record.description);
        for verb in &occ.verbs {
            g.bump(verb);
            g.add_provider(verb, &record.id);
        }
        for phrase in &occ.phrases {
            g.bump(&phrase.text);
            g.add_provider(&phrase.text, &record.id);
            g.mark_domain(&phrase.text);
            if let Some(head) = head_word(&phrase.text) {
                g.add_is_a(&phrase.text, head);
                g.mark_domain(head);
            }
        }
    }
    Ok(g)
}
