fn main() {
    onesided::cli::main_exit()
}
