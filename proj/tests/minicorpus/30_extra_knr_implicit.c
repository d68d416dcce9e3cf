int x;
f (a, b)
     int a, b;
{
  return a * b;
}
main ()
{
  if (f (2, 3) != 6)
    abort ();
  exit (0);
}
