//! Code-block extraction from model responses.

/// Extract the program from a raw model response: the longest fenced block
/// tagged `rust` (or `rs`), falling back to the longest untagged block when
/// no block is tagged for Rust. Returns nothing when the response contains
/// no fence at all.
///
/// Longest rather than first, because chain-of-thought responses often show
/// short illustrative snippets before the full program.
pub fn extract_code(raw_response: &str) -> Option<String> {
    let blocks = fenced_blocks(raw_response);
    if blocks.is_empty() {
        return None;
    }
    let rust_tagged: Vec<&FencedBlock> = blocks
        .iter()
        .filter(|b| matches!(b.tag.as_str(), "rust" | "rs"))
        .collect();
    let candidates: Vec<&FencedBlock> = if !rust_tagged.is_empty() {
        rust_tagged
    } else {
        blocks.iter().filter(|b| b.tag.is_empty()).collect()
    };
    candidates
        .into_iter()
        .max_by_key(|b| b.body.len())
        .map(|b| b.body.clone())
}

struct FencedBlock {
    tag: String,
    body: String,
}

fn fenced_blocks(text: &str) -> Vec<FencedBlock> {
    let mut blocks = Vec::new();
    let mut current: Option<FencedBlock> = None;
    for line in text.lines() {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("```") {
            match current.take() {
                Some(block) => blocks.push(block),
                None => {
                    current = Some(FencedBlock {
                        tag: rest.trim().to_ascii_lowercase(),
                        body: String::new(),
                    })
                }
            }
        } else if let Some(block) = current.as_mut() {
            block.body.push_str(line);
            block.body.push('\n');
        }
    }
    // an unterminated fence still yields its content
    if let Some(block) = current {
        blocks.push(block);
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rust_block() {
        let response = "Here is the code:\n```rust\nfn main() {}\n```\nEnjoy!";
        assert_eq!(extract_code(response).unwrap(), "fn main() {}\n");
    }

    #[test]
    fn prose_then_block_takes_only_the_block() {
        let response = "\
(1) GCM provides authentication.
(2) Nonce uniqueness.
(3) Use OsRng.

```rust
use aes_gcm::Aes256Gcm;
fn main() {}
```";
        let code = extract_code(response).unwrap();
        assert!(code.starts_with("use aes_gcm"));
        assert!(!code.contains("Nonce uniqueness"));
    }

    #[test]
    fn longest_rust_block_wins() {
        let response = "\
```rust
let short = 1;
```
Some text.
```rust
fn main() {
    let much_longer_block = true;
}
```";
        let code = extract_code(response).unwrap();
        assert!(code.contains("much_longer_block"));
    }

    #[test]
    fn untagged_block_used_when_none_tagged() {
        let response = "```\nfn main() {}\n```";
        assert_eq!(extract_code(response).unwrap(), "fn main() {}\n");
    }

    #[test]
    fn tagged_rust_preferred_over_longer_untagged() {
        let response = "\
```
this untagged block is quite a bit longer than the rust one
```
```rust
fn main() {}
```";
        assert_eq!(extract_code(response).unwrap(), "fn main() {}\n");
    }

    #[test]
    fn no_fence_is_none() {
        assert_eq!(extract_code("no code here, sorry"), None);
        assert_eq!(extract_code(""), None);
    }

    #[test]
    fn non_rust_tags_only_is_none() {
        let response = "```python\nprint('hi')\n```";
        assert_eq!(extract_code(response), None);
    }
}
