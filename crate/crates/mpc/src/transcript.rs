use mediatorless_net::Record;
use serde::{Deserialize, Serialize};

pub const TRANSCRIPT_SCHEMA: &str = "mediatorless-transcript-v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub round: u32,
    pub tag: String,
    pub from: usize,
    /// `None` for a broadcast.
    pub to: Option<usize>,
    pub payload: Option<Vec<u64>>,
    /// Filled in by lie labelling; `None` until then.
    pub lie: Option<bool>,
}

/// Every message of one run, as dumped with `--dump-transcript`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub schema: String,
    pub players: usize,
    pub entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn from_records(players: usize, records: &[Record]) -> Self {
        Transcript {
            schema: TRANSCRIPT_SCHEMA.into(),
            players,
            entries: records
                .iter()
                .map(|r| TranscriptEntry {
                    round: r.round,
                    tag: r.tag.clone(),
                    from: r.from,
                    to: r.to,
                    payload: r.sent.clone(),
                    lie: None,
                })
                .collect(),
        }
    }

    /// Marks every entry whose sent payload differs from what the sender's
    /// code produced.
    pub fn label_from_records(&mut self, records: &[Record]) {
        for (e, r) in self.entries.iter_mut().zip(records) {
            e.lie = Some(r.is_lie());
        }
    }
}
