use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    // ITENSOR_THREADS caps the worker pool; unset means one worker per core
    if let Some(n) = std::env::var("ITENSOR_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let code = itensor::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
