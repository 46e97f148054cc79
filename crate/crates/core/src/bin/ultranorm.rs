fn main() {
    std::process::exit(ultranorm::cli::dispatch(std::env::args_os()));
}
