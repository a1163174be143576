fn main() {
    std::process::exit(logatlas::cli::main_with_args(std::env::args_os()));
}
