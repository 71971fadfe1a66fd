use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let result = fci_sparse::cli::run(std::env::args_os(), &mut lock);
    let _ = lock.flush();
    if let Err(f) = result {
        if f.code == fci_sparse::cli::EXIT_OK {
            print!("{}", f.message);
        } else {
            eprintln!("fci-sparse: {}", f.message.trim_end());
        }
        std::process::exit(f.code);
    }
}
