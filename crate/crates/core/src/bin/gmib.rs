fn main() {
    std::process::exit(gmib::cli::main_with(std::env::args_os()));
}
