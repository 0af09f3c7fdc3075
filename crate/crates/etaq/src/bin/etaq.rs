fn main() {
    std::process::exit(etaq::cli::run(std::env::args_os()));
}
