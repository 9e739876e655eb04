from laboratorio.cli_reporting import main


if __name__ == '__main__':
	main()
