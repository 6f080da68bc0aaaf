//! Line protocol for segment oracles living in another process.
//!
//! Request: `SEG px py qx qy\n`. Response: `n x1 y1 x2 y2 ... xn yn\n`.
//! The child is started with `sh -c <command>` and queried one request at a
//! time; a mutex serialises concurrent callers.

use std::fmt;
use std::io::{self, BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::Mutex;

use crate::segment::{DigitalSegment, GridPoint, SegmentError, SegmentOracle};

pub fn format_request(p: GridPoint, q: GridPoint) -> String {
    format!("SEG {} {} {} {}\n", p.x, p.y, q.x, q.y)
}

pub fn parse_request(line: &str) -> Result<(GridPoint, GridPoint), SegmentError> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some("SEG") {
        return Err(SegmentError::Malformed(format!("not a SEG request: {line:?}")));
    }
    let nums: Vec<i64> = tokens
        .map(|t| t.parse())
        .collect::<Result<_, _>>()
        .map_err(|_| SegmentError::Malformed(format!("bad coordinate in {line:?}")))?;
    if nums.len() != 4 {
        return Err(SegmentError::Malformed(format!(
            "expected four coordinates in {line:?}"
        )));
    }
    Ok((GridPoint::new(nums[0], nums[1]), GridPoint::new(nums[2], nums[3])))
}

pub fn format_response(seg: &DigitalSegment) -> String {
    let mut out = seg.len().to_string();
    for p in seg.points() {
        out.push_str(&format!(" {} {}", p.x, p.y));
    }
    out.push('\n');
    out
}

pub fn parse_response(line: &str) -> Result<DigitalSegment, SegmentError> {
    let nums: Vec<i64> = line
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()
        .map_err(|_| SegmentError::Malformed(format!("non-integer token in {line:?}")))?;
    let (&n, coords) = nums
        .split_first()
        .ok_or_else(|| SegmentError::Malformed("empty response".to_string()))?;
    if n < 1 || coords.len() as i64 != 2 * n {
        return Err(SegmentError::Malformed(format!(
            "announced {n} points but carried {} coordinates",
            coords.len()
        )));
    }
    Ok(DigitalSegment::from_points(
        coords.chunks(2).map(|c| GridPoint::new(c[0], c[1])).collect(),
    ))
}

/// Answers requests from `input` until EOF. Per-request failures are written
/// back as `ERR <message>` lines.
pub fn serve<O, R, W>(oracle: &O, input: R, mut output: W) -> io::Result<()>
where
    O: SegmentOracle + ?Sized,
    R: BufRead,
    W: Write,
{
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let reply = parse_request(&line)
            .and_then(|(p, q)| oracle.segment(p, q))
            .map(|seg| format_response(&seg))
            .unwrap_or_else(|e| format!("ERR {e}\n"));
        output.write_all(reply.as_bytes())?;
        output.flush()?;
    }
    Ok(())
}

struct Session {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

pub struct ExternalOracle {
    command: String,
    session: Mutex<Session>,
}

impl fmt::Debug for ExternalOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExternalOracle")
            .field("command", &self.command)
            .finish()
    }
}

impl ExternalOracle {
    pub fn spawn(command: &str) -> Result<Self, SegmentError> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| SegmentError::Transport(format!("spawning {command:?}: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok(Self {
            command: command.to_string(),
            session: Mutex::new(Session { child, stdin, stdout }),
        })
    }

    pub fn command(&self) -> &str {
        &self.command
    }
}

impl SegmentOracle for ExternalOracle {
    fn segment(&self, p: GridPoint, q: GridPoint) -> Result<DigitalSegment, SegmentError> {
        let mut session = self
            .session
            .lock()
            .map_err(|_| SegmentError::Transport("oracle session poisoned".to_string()))?;
        let transport = |e: io::Error| SegmentError::Transport(e.to_string());
        session
            .stdin
            .write_all(format_request(p, q).as_bytes())
            .map_err(transport)?;
        session.stdin.flush().map_err(transport)?;
        let mut line = String::new();
        let read = session.stdout.read_line(&mut line).map_err(transport)?;
        if read == 0 {
            return Err(SegmentError::Transport(format!("{:?} closed its output", self.command)));
        }
        if let Some(msg) = line.strip_prefix("ERR") {
            return Err(SegmentError::Transport(msg.trim().to_string()));
        }
        parse_response(&line)
    }
}

impl Drop for ExternalOracle {
    fn drop(&mut self) {
        if let Ok(session) = self.session.get_mut() {
            let _ = session.child.kill();
            let _ = session.child.wait();
        }
    }
}
