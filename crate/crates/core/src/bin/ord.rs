use std::sync::atomic::Ordering;

fn main() {
    let _ = ctrlc::set_handler(|| ordlab::cli::INTERRUPT.store(true, Ordering::Relaxed));
    let code = ordlab::cli::main_with_args(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
