pub mod algebra;
pub mod bench;
pub mod conv;
pub mod gen;
pub mod laws;
pub mod monoid;
pub mod par;
pub mod poly;
pub mod regexp;
pub mod selftest;
pub mod trie;
