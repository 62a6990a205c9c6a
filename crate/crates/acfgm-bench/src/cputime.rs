//! Per-run CPU timing.
//!
//! Runs may execute on concurrent workers, so the relevant clock is the
//! worker thread's own CPU time, not the process total.

/// CPU-time stopwatch for the calling thread. Falls back to wall time on
/// platforms without a thread CPU clock.
pub struct CpuTimer {
    start: f64,
    wall_start: std::time::Instant,
}

impl CpuTimer {
    pub fn start() -> Self {
        Self {
            start: thread_cpu_seconds(),
            wall_start: std::time::Instant::now(),
        }
    }

    pub fn cpu_elapsed(&self) -> f64 {
        thread_cpu_seconds() - self.start
    }

    pub fn wall_elapsed(&self) -> f64 {
        self.wall_start.elapsed().as_secs_f64()
    }
}

#[cfg(target_os = "linux")]
fn thread_cpu_seconds() -> f64 {
    let mut ts = libc::timespec {
        tv_sec: 0,
        tv_nsec: 0,
    };
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return 0.0;
    }
    ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9
}

#[cfg(not(target_os = "linux"))]
fn thread_cpu_seconds() -> f64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}
