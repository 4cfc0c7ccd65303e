//! Record types, ingestion, cleansing and time partitioning.

mod cleanse;
mod ingest;
mod model;
mod partition;

pub use cleanse::{cleanse, default_media_hosts, is_media_url, parse_host_list, CleansingConfig, CleansingReport, RuleCounts};
pub use ingest::{
    ingest, ingest_dir, ingest_files, write_dir, write_jsonl, Diagnostic, IngestError, Ingested, RecordKind,
    POSTS_FILE, REPLIES_FILE, USERS_FILE,
};
pub use model::{Corpus, IntegrityError, Post, PostId, Reply, ReplyId, UserId, UserProfile};
pub use partition::{partition, Period, PartitionError, TimeChunk, WindowSpec};
