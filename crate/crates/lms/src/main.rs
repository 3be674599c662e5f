fn main() {
    std::process::exit(lms::cli::run(std::env::args_os()));
}
