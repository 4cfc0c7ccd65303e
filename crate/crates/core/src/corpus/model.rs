use std::collections::BTreeMap;
use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }
    };
}

string_id!(
    /// Account identifier.
    UserId
);
string_id!(PostId);
string_id!(ReplyId);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserProfile {
    pub user_id: UserId,
    pub handle: String,
    pub created_at: DateTime<Utc>,
    pub followers_count: u64,
    pub friends_count: u64,
    #[serde(default)]
    pub bio: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Post {
    pub post_id: PostId,
    pub user_id: UserId,
    pub created_at: DateTime<Utc>,
    pub text: String,
    #[serde(default)]
    pub urls: Vec<String>,
    pub retweet_count: u64,
    pub favorite_count: u64,
    pub replies_count: u64,
    pub is_retweet: bool,
    #[serde(default)]
    pub language: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reply {
    pub reply_id: ReplyId,
    pub parent_post_id: PostId,
    /// May refer to an account outside the profiled user set.
    pub author_user_id: UserId,
    pub created_at: DateTime<Utc>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrityError {
    #[error("duplicate user_id `{0}`")]
    DuplicateUser(UserId),
    #[error("duplicate post_id `{0}`")]
    DuplicatePost(PostId),
    #[error("duplicate reply_id `{0}`")]
    DuplicateReply(ReplyId),
    #[error("post `{post}` references unknown user `{user}`")]
    UnknownAuthor { post: PostId, user: UserId },
    #[error("post `{post}` predates the creation of its author's profile")]
    PostBeforeProfile { post: PostId },
    #[error("reply `{reply}` references unknown post `{post}`")]
    UnknownParent { reply: ReplyId, post: PostId },
}

/// Users, posts and replies with every foreign reference resolved.
///
/// Records are keyed by id, so iteration order (and therefore every
/// downstream summation) is independent of input order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    users: BTreeMap<UserId, UserProfile>,
    posts: BTreeMap<PostId, Post>,
    replies: BTreeMap<ReplyId, Reply>,
}

impl Corpus {
    /// Builds a corpus, rejecting the first integrity violation found.
    pub fn new(
        users: impl IntoIterator<Item = UserProfile>,
        posts: impl IntoIterator<Item = Post>,
        replies: impl IntoIterator<Item = Reply>,
    ) -> Result<Self, IntegrityError> {
        let mut corpus = Corpus::default();
        for u in users {
            corpus.insert_user(u)?;
        }
        for p in posts {
            corpus.insert_post(p)?;
        }
        for r in replies {
            corpus.insert_reply(r)?;
        }
        Ok(corpus)
    }

    pub(crate) fn insert_user(&mut self, user: UserProfile) -> Result<(), IntegrityError> {
        if self.users.contains_key(&user.user_id) {
            return Err(IntegrityError::DuplicateUser(user.user_id));
        }
        self.users.insert(user.user_id.clone(), user);
        Ok(())
    }

    pub(crate) fn insert_post(&mut self, post: Post) -> Result<(), IntegrityError> {
        if self.posts.contains_key(&post.post_id) {
            return Err(IntegrityError::DuplicatePost(post.post_id));
        }
        let Some(author) = self.users.get(&post.user_id) else {
            return Err(IntegrityError::UnknownAuthor {
                post: post.post_id,
                user: post.user_id,
            });
        };
        if post.created_at < author.created_at {
            return Err(IntegrityError::PostBeforeProfile { post: post.post_id });
        }
        self.posts.insert(post.post_id.clone(), post);
        Ok(())
    }

    pub(crate) fn insert_reply(&mut self, reply: Reply) -> Result<(), IntegrityError> {
        if self.replies.contains_key(&reply.reply_id) {
            return Err(IntegrityError::DuplicateReply(reply.reply_id));
        }
        if !self.posts.contains_key(&reply.parent_post_id) {
            return Err(IntegrityError::UnknownParent {
                reply: reply.reply_id,
                post: reply.parent_post_id,
            });
        }
        self.replies.insert(reply.reply_id.clone(), reply);
        Ok(())
    }

    pub fn users(&self) -> impl Iterator<Item = &UserProfile> {
        self.users.values()
    }

    pub fn posts(&self) -> impl Iterator<Item = &Post> {
        self.posts.values()
    }

    pub fn replies(&self) -> impl Iterator<Item = &Reply> {
        self.replies.values()
    }

    pub fn user(&self, id: &UserId) -> Option<&UserProfile> {
        self.users.get(id)
    }

    pub fn post(&self, id: &PostId) -> Option<&Post> {
        self.posts.get(id)
    }

    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    pub fn post_count(&self) -> usize {
        self.posts.len()
    }

    pub fn reply_count(&self) -> usize {
        self.replies.len()
    }

    /// Timestamp of the newest post, if any.
    pub fn newest_post(&self) -> Option<DateTime<Utc>> {
        self.posts.values().map(|p| p.created_at).max()
    }

    /// Splits into owned parts, for rebuilding after a transformation.
    pub(crate) fn into_parts(
        self,
    ) -> (
        BTreeMap<UserId, UserProfile>,
        BTreeMap<PostId, Post>,
        BTreeMap<ReplyId, Reply>,
    ) {
        (self.users, self.posts, self.replies)
    }

    /// Reassembles parts that are known to be consistent.
    pub(crate) fn from_parts(
        users: BTreeMap<UserId, UserProfile>,
        posts: BTreeMap<PostId, Post>,
        replies: BTreeMap<ReplyId, Reply>,
    ) -> Self {
        debug_assert!(posts.values().all(|p| users.contains_key(&p.user_id)));
        debug_assert!(replies.values().all(|r| posts.contains_key(&r.parent_post_id)));
        Corpus {
            users,
            posts,
            replies,
        }
    }
}
