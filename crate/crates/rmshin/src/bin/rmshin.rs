fn main() {
    std::process::exit(rmshin::cli::run(std::env::args_os()));
}
