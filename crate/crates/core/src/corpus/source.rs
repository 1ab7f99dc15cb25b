//! Line-oriented corpus sources that can be split into shards for parallel
//! vocabulary counting and training.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Seek, SeekFrom};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

/// A sentence with its 1-based line number in the source.
pub type NumberedLine = (usize, String);

pub type LineIter<'a> = Box<dyn Iterator<Item = io::Result<NumberedLine>> + Send + 'a>;

/// One sentence per line. Shards partition the lines: concatenating shards
/// `0..count` in order yields every line exactly once.
pub trait SentenceSource: Sync {
    fn shard(&self, index: usize, count: usize) -> io::Result<LineIter<'_>>;

    fn lines(&self) -> io::Result<LineIter<'_>> {
        self.shard(0, 1)
    }
}

impl SentenceSource for [String] {
    fn shard(&self, index: usize, count: usize) -> io::Result<LineIter<'_>> {
        let (start, end) = chunk_bounds(self.len(), index, count);
        Ok(Box::new(
            self[start..end]
                .iter()
                .enumerate()
                .map(move |(i, s)| Ok((start + i + 1, s.clone()))),
        ))
    }
}

impl SentenceSource for Vec<String> {
    fn shard(&self, index: usize, count: usize) -> io::Result<LineIter<'_>> {
        self.as_slice().shard(index, count)
    }
}

fn chunk_bounds(len: usize, index: usize, count: usize) -> (usize, usize) {
    let count = count.max(1);
    (len * index / count, len * (index + 1) / count)
}

/// A UTF-8 text file. Shards split the file at line boundaries close to
/// equal byte offsets.
#[derive(Debug)]
pub struct TextFile {
    path: PathBuf,
    len: u64,
    boundaries: Mutex<HashMap<usize, Vec<ShardStart>>>,
}

#[derive(Clone, Copy, Debug)]
struct ShardStart {
    offset: u64,
    line: usize,
}

impl TextFile {
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let len = std::fs::metadata(&path)?.len();
        Ok(TextFile {
            path,
            len,
            boundaries: Mutex::new(HashMap::new()),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Shard start positions for `count` shards, plus a final sentinel at EOF.
    fn starts(&self, count: usize) -> io::Result<Vec<ShardStart>> {
        let mut cache = self.boundaries.lock().unwrap();
        if let Some(starts) = cache.get(&count) {
            return Ok(starts.clone());
        }
        let mut starts = vec![ShardStart { offset: 0, line: 1 }];
        if count > 1 {
            let targets: Vec<u64> = (1..count)
                .map(|i| self.len * i as u64 / count as u64)
                .collect();
            let mut reader = BufReader::with_capacity(1 << 20, File::open(&self.path)?);
            let mut buf = vec![0u8; 1 << 20];
            let (mut offset, mut line) = (0u64, 1usize);
            let mut next = 0;
            loop {
                let n = reader.read(&mut buf)?;
                if n == 0 {
                    break;
                }
                for &b in &buf[..n] {
                    offset += 1;
                    if b == b'\n' {
                        line += 1;
                        while next < targets.len() && offset > targets[next] {
                            starts.push(ShardStart { offset, line });
                            next += 1;
                        }
                    }
                }
            }
            while starts.len() < count {
                starts.push(ShardStart {
                    offset: self.len,
                    line,
                });
            }
        }
        starts.push(ShardStart {
            offset: self.len,
            line: 0,
        });
        cache.insert(count, starts.clone());
        Ok(starts)
    }
}

impl SentenceSource for TextFile {
    fn shard(&self, index: usize, count: usize) -> io::Result<LineIter<'_>> {
        let count = count.max(1);
        let starts = self.starts(count)?;
        let (start, end) = (starts[index], starts[index + 1]);
        let mut file = File::open(&self.path)?;
        file.seek(SeekFrom::Start(start.offset))?;
        let reader = BufReader::with_capacity(1 << 16, file).take(end.offset - start.offset);
        Ok(Box::new(
            reader
                .lines()
                .enumerate()
                .map(move |(i, line)| line.map(|l| (start.line + i, l))),
        ))
    }
}
